//! Observed orders under (h, dt) -> (h/2, dt/2) for one initial-data family.
//! Pass `zero`, `tiny`, `standard` or `large`.

use hedgehog::kernel::QuadratureSpec;
use hedgehog::verify::{convergence_study, ConvergenceProblem, StudyParams};

fn main() -> hedgehog::Result<()> {
    let problem = match std::env::args().nth(1).as_deref().unwrap_or("tiny") {
        "zero" => ConvergenceProblem::Zero,
        "standard" => ConvergenceProblem::Standard,
        "large" => ConvergenceProblem::Large,
        _ => ConvergenceProblem::Tiny,
    };
    let params = StudyParams { base_n: 256, ..Default::default() };
    let report = convergence_study(problem, &params, &QuadratureSpec::default())?;
    println!("{} data, N = {:?}", problem.name(), report.nodes);
    for e in report.estimates() {
        match e.order {
            Some(q) => println!("{:<24} order {q:.3}  errors {:?}", e.quantity, e.errors),
            None => println!("{:<24} inconclusive ({})", e.quantity, e.inconclusive.as_deref().unwrap_or("")),
        }
    }
    Ok(())
}
