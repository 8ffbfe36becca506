use std::process::ExitCode;

use bergman::acceptance::{render_line, run_check, CHECK_COUNT};

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=CHECK_COUNT {
        let o = run_check(id);
        println!("{}", render_line(&o));
        if !o.passed {
            failed += 1;
        }
    }
    println!("{} of {CHECK_COUNT} criteria passed", CHECK_COUNT - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
