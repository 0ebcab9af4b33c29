use std::process::ExitCode;

fn main() -> ExitCode {
    match k3lat_cli::run(std::env::args_os()) {
        Ok((report, as_json)) => {
            print!("{}", report.render(as_json));
            if as_json {
                println!();
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            ExitCode::from(code)
        }
    }
}
