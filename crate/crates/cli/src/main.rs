fn main() {
    let o = mdm_cli::app::run(std::env::args_os());
    if o.code == 0 {
        print!("{}", o.out);
    } else {
        eprint!("{}", o.out);
    }
    std::process::exit(o.code);
}
