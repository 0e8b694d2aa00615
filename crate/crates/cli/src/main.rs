use clap::Parser;

fn main() {
    let cli = pde_struct_cli::Cli::parse();
    std::process::exit(pde_struct_cli::execute(cli));
}
