use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::checks::{
    verify_chern, verify_coefficient_sum, verify_degree_vanishing, verify_lemma_1_3,
    verify_lemma_2_2, verify_prop_2_1, verify_theorem_1_1, verify_theorem_2_4,
    verify_wu_consistency,
};
use super::report::{CheckKind, VerificationReport};
use super::{HarnessError, HarnessOptions};

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub n_range: RangeInclusive<u32>,
    pub j_range: RangeInclusive<u32>,
    /// Upper bound on `m` for the `m < n/2 + j` family.
    pub m_max: u32,
    pub checks: Vec<CheckKind>,
    pub options: HarnessOptions,
    pub parallel: bool,
    pub wu_d_max: u32,
    pub wu_r_max: u32,
    pub coeff_k_max: u32,
    pub chern_dims: Vec<u32>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let mut chern_dims: Vec<u32> = (1..=16).collect();
        chern_dims.push(31);
        Self {
            n_range: 1..=24,
            j_range: 0..=8,
            m_max: 20,
            checks: CheckKind::ALL.to_vec(),
            options: HarnessOptions::default(),
            parallel: true,
            wu_d_max: 7,
            wu_r_max: 10,
            coeff_k_max: 10,
            chern_dims,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSummary {
    pub reports: Vec<VerificationReport>,
    pub passed: usize,
    pub failures: usize,
}

impl SweepSummary {
    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }
}

type Job = Box<dyn Fn() -> Result<VerificationReport, HarnessError> + Send + Sync>;

fn jobs(config: &SweepConfig) -> Vec<Job> {
    let opts = config.options;
    let mut out: Vec<Job> = Vec::new();
    let family_1_1: Vec<(u32, u32, u32)> = config
        .n_range
        .clone()
        .flat_map(|n| {
            let m_max = config.m_max;
            (0..=m_max).flat_map(move |m| {
                (0..=m)
                    .filter(move |&j| 2 * m < n + 2 * j)
                    .map(move |j| (n, m, j))
            })
        })
        .collect();
    let family_2_1: Vec<(u32, u32)> = config
        .n_range
        .clone()
        .flat_map(|n| config.j_range.clone().map(move |j| (n, j)))
        .collect();

    for &check in &config.checks {
        match check {
            CheckKind::Thm1 | CheckKind::Lemma13 | CheckKind::DegreeVanishing => {
                for &(n, m, j) in &family_1_1 {
                    out.push(Box::new(move || match check {
                        CheckKind::Thm1 => verify_theorem_1_1(n, m, j, &opts),
                        CheckKind::Lemma13 => verify_lemma_1_3(n, m, j, &opts),
                        _ => verify_degree_vanishing(n, m, j, &opts),
                    }));
                }
            }
            CheckKind::Lemma22 | CheckKind::Prop21 | CheckKind::Thm24 => {
                for &(n, j) in &family_2_1 {
                    out.push(Box::new(move || match check {
                        CheckKind::Lemma22 => verify_lemma_2_2(n, j, &opts),
                        CheckKind::Prop21 => verify_prop_2_1(n, j, &opts),
                        _ => verify_theorem_2_4(n, j, &opts),
                    }));
                }
            }
            CheckKind::Wu => {
                for d in 1..=config.wu_d_max {
                    for r in 0..=config.wu_r_max {
                        out.push(Box::new(move || verify_wu_consistency(d, r, &opts)));
                    }
                }
            }
            CheckKind::Coeffsum => {
                for k in 0..=config.coeff_k_max {
                    // smallest admissible window: m - j = 2k, d = 2^t - 1 >= 2k
                    let d = (2 * k + 1).next_power_of_two() - 1;
                    out.push(Box::new(move || {
                        verify_coefficient_sum(k, d.max(1), 2 * k, 0)
                    }));
                }
            }
            CheckKind::Chern => {
                for &d in &config.chern_dims {
                    out.push(Box::new(move || verify_chern(d)));
                }
            }
        }
    }
    out
}

/// Runs every configured check over the configured ranges. Results are
/// sorted by check, then `(n, m, j)`, then extra parameters, independent of
/// scheduling.
pub fn sweep(config: &SweepConfig) -> Result<SweepSummary, HarnessError> {
    let jobs = jobs(config);
    let mut reports: Vec<VerificationReport> = if config.parallel {
        jobs.par_iter().map(|f| f()).collect::<Result<_, _>>()?
    } else {
        jobs.iter().map(|f| f()).collect::<Result<_, _>>()?
    };
    reports.sort_by_key(|r| r.sort_key());
    let passed = reports.iter().filter(|r| r.passed()).count();
    let failures = reports.len() - passed;
    Ok(SweepSummary {
        reports,
        passed,
        failures,
    })
}
