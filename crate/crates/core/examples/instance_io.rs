// Reading, writing and checking instances in both accepted layouts.

use anyhow::Result;
use sop_search::Instance;

pub fn run() -> Result<()> {
    let inst = Instance::generate_random(6, 50, 0.3, 1);
    let tsplib = inst.to_tsplib_string();
    print!("{tsplib}");
    let back = Instance::parse(&tsplib)?;
    assert_eq!(back.to_bare_string(), inst.to_bare_string());

    let bare = Instance::parse(&inst.to_bare_string())?;
    println!(
        "bare layout: {} vertices, {} precedences",
        bare.len(),
        bare.precedence_count()
    );

    for text in [
        "3\n0 1 2\n-1 0 1\n",
        "3\n0 -1 1\n-1 0 1\n-1 -1 0\n",
        "4\n0 1 1 1\n-1 0 -1 1\n-1 -1 0 1\n-1 -1 -1 0\n",
    ] {
        match Instance::parse(text) {
            Ok(_) => println!("accepted {text:?}"),
            Err(e) => println!("rejected: {e}"),
        }
    }

    let order: Vec<usize> = (0..inst.len()).collect();
    match inst.violation(&order) {
        None => println!("identity order costs {}", inst.path_cost(&order)),
        Some(v) => println!("identity order is infeasible: {v}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
