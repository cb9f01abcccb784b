use clap::Parser;
use electron_layer::cli;

fn main() {
    let parsed = match cli::Cli::try_parse() {
        Ok(parsed) => parsed,
        Err(err) => {
            // clap's own exit code conventions differ; usage errors are 1 here
            if err.use_stderr() {
                eprint!("{err}");
                std::process::exit(1);
            }
            print!("{err}");
            std::process::exit(0);
        }
    };
    std::process::exit(cli::run(parsed));
}
