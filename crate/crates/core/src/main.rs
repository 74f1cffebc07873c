use std::io;

fn main() {
    let code = ampnoise::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
