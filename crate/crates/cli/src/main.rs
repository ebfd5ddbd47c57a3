use clap::Parser;
use locclab_cli::{configure_threads, run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let code = configure_threads()
        .and_then(|_| run(&cli))
        .unwrap_or_else(|e| {
            eprintln!("error: {e}");
            1
        });
    std::process::exit(code);
}
