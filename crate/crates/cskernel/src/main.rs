use std::io::Write;

fn main() {
    let outcome = cskernel::frontend::cli::run(std::env::args().skip(1).collect());
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stderr.write_all(outcome.stderr.as_bytes());
    let _ = stdout.flush();
    let _ = stderr.flush();
    std::process::exit(outcome.code);
}
