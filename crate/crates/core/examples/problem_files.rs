//! Problem files and JSON reports, as used by the `cfrob` binary.
use conformable_frobenius::cli::{parse_problem_file, SolutionReport};
use conformable_frobenius::{solve, Result};

fn main() -> Result<()> {
    let text = include_str!("../problems/bessel_nu0.txt");
    let file = parse_problem_file(text)?;
    for w in &file.warnings {
        println!("warning: {w}");
    }
    let res = solve(&file.spec)?;
    let report = SolutionReport::from_result(&file.spec, &res);
    let json = report.to_json();
    println!("{}", &json[..json.find("\"y1\"").unwrap_or(json.len())]);

    // reports round-trip exactly
    let back = SolutionReport::from_json(&json)?;
    assert_eq!(back, report);
    let (_, y2) = back.solutions()?;
    println!("y2(1) from the report: {}", y2.eval(1.0)?);
    println!("y2(1) directly:        {}", res.y2.eval(1.0)?);
    Ok(())
}
