//! Script runner, REPL and directive interpreter behind the `bt` command.

pub mod session;

pub use session::{run_script, Reply, Session, Summary, ValidateOpts};
