//! Named groups of checks run by `hedgehog verify`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::convergence::{convergence_study, ConvergenceProblem, StudyParams};
use super::identities::{identity_report, identity_spec, SampleSet};
use super::scans::{corollary1_scan, hardy_family, hardy_report, lemma1_scan, Corollary1Params, Lemma1Params};
use super::VerificationReport;
use crate::error::{Error, Result};
use crate::kernel::quadrature::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Inequalities,
    Convergence,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "inequalities" => Ok(Suite::Inequalities),
            "convergence" => Ok(Suite::Convergence),
            "all" => Ok(Suite::All),
            other => Err(Error::Config(format!(
                "unknown suite '{other}' (expected identities, inequalities, convergence or all)"
            ))),
        }
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Inequalities => "inequalities",
            Suite::Convergence => "convergence",
            Suite::All => "all",
        }
    }
}

/// Knobs shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Seed of the random identity samples drawn on top of the fixed set.
    pub seed: u64,
    pub random_samples: usize,
    pub identity_tol: f64,
    pub lemma1: Lemma1Params,
    pub corollary_resolution: usize,
    pub hardy_eps0: f64,
    pub hardy_members: usize,
    pub study: StudyParams,
    pub order_tol: f64,
    /// Quadrature for the evolution diagnostics used by the refinement study.
    pub quadrature: QuadratureSpec,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            random_samples: 64,
            identity_tol: 1e-9,
            lemma1: Lemma1Params::default(),
            corollary_resolution: 512,
            hardy_eps0: 0.16,
            hardy_members: 5,
            study: StudyParams::default(),
            order_tol: 0.3,
            quadrature: QuadratureSpec::default(),
        }
    }
}

fn identities(o: &SuiteOptions) -> Result<VerificationReport> {
    let set = SampleSet::standard().with_random(o.seed, o.random_samples);
    let mut rep = identity_report(&set, o.identity_tol, &identity_spec())?;
    rep.note("identity_seed", o.seed);
    Ok(rep)
}

fn inequalities(o: &SuiteOptions) -> Result<VerificationReport> {
    let l = lemma1_scan(&o.lemma1)?;
    let mut rep = l.report();
    let c = corollary1_scan(&Corollary1Params { resolution: o.corollary_resolution, ..Corollary1Params::new(l.r0) })?;
    rep.extend(c.report());
    rep.extend(hardy_report(&hardy_family(o.hardy_eps0, o.hardy_members)?));
    Ok(rep)
}

fn convergence(o: &SuiteOptions) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("convergence");
    for problem in ConvergenceProblem::ALL {
        rep.extend(convergence_study(problem, &o.study, &o.quadrature)?.report(o.order_tol));
    }
    Ok(rep)
}

pub fn run_suite(suite: Suite, options: &SuiteOptions) -> Result<VerificationReport> {
    let mut rep = match suite {
        Suite::Identities => identities(options)?,
        Suite::Inequalities => inequalities(options)?,
        Suite::Convergence => convergence(options)?,
        Suite::All => {
            let mut r = identities(options)?;
            r.extend(inequalities(options)?);
            r.extend(convergence(options)?);
            r
        }
    };
    rep.suite = suite.name().into();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in [Suite::Identities, Suite::Inequalities, Suite::Convergence, Suite::All] {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("bogus".parse::<Suite>(), Err(Error::Config(_))));
    }
}
