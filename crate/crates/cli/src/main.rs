fn main() {
    let (out, code) = cprop_cli::run(std::env::args_os().skip(1));
    if code == 2 {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
