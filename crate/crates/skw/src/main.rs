use skw::cli::cli_dispatch;

fn main() {
    std::process::exit(cli_dispatch(std::env::args_os()));
}
