use std::io::Write;

fn main() {
    let outcome = nct_spin::run(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(outcome.exit_code);
}
