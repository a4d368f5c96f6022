//! Named identity checks with timings, as driven by `hzeta verify`.

use std::time::Instant;

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{FactoredRational, Poly, SignedMonomial};
use crate::igusa::{check_i_equals_k, fibre_k, p_factor};
use crate::zeta::{
    check_cross_forms, check_ideal_factorization, check_residue_identity, funeq_check, pole_analysis, pole_candidates,
    reduced_cone_series, reduced_zeta_brenti, reduced_zeta_eulerian, zeta_thm_b,
};

pub const CHECK_NAMES: [&str; 6] = ["crossform", "funeq", "poles", "fibre", "residue", "reduced"];
pub const POLE_PRIMES: [u64; 3] = [2, 3, 5];

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub n: usize,
    pub status: &'static str,
    pub detail: Value,
    pub millis: u128,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// Run one named check at `n`. Guard violations and unknown names are
/// returned as errors; identity failures become a `fail` report.
pub fn run_check(name: &str, n: usize) -> Result<CheckReport> {
    let start = Instant::now();
    let outcome = match name {
        "crossform" => crossform(n),
        "funeq" => funeq_check(n).map(|_| json!("zeta(1/q, 1/T) = -q^binom(2n+1,2) T^(2n+1) zeta(q, T)")),
        "poles" => poles(n),
        "fibre" => fibre(n),
        "residue" => residue(n),
        "reduced" => reduced(n),
        _ => return Err(Error::InvalidArgument(format!("unknown check {name:?}"))),
    };
    let (status, detail) = match outcome {
        Ok(d) => ("pass", d),
        Err(e @ Error::SizeGuard { .. }) => return Err(e),
        Err(e) => ("fail", json!(e.to_string())),
    };
    Ok(CheckReport { check: name.to_string(), n, status, detail, millis: start.elapsed().as_millis() })
}

fn crossform(n: usize) -> Result<Value> {
    check_cross_forms(n)?;
    check_ideal_factorization(n)?;
    Ok(json!("W_n-sum, (n+1)-term and type-B forms agree; ideal factorization holds"))
}

/// Locations `s = m` with `m in [n]` and `m(m+1) = 4n`, where the pole is
/// double; every other pole is simple.
pub fn double_poles(n: usize) -> Vec<Ratio<i64>> {
    (1..=n as i64).filter(|m| m * (m + 1) == 4 * n as i64).map(Ratio::from_integer).collect()
}

fn poles(n: usize) -> Result<Value> {
    let cands = pole_candidates(n);
    let doubles = double_poles(n);
    let reports = pole_analysis(n, &POLE_PRIMES)?;
    for rep in &reports {
        for pole in &rep.poles {
            let s = pole.s();
            if !cands.contains(&s) {
                return Err(Error::IdentityMismatch(format!("pole s={s} at p={} is not a candidate", rep.p)));
            }
            let expect = if doubles.contains(&s) { 2 } else { 1 };
            if pole.order != expect {
                return Err(Error::IdentityMismatch(format!(
                    "pole s={s} at p={} has order {}, expected {expect}",
                    rep.p, pole.order
                )));
            }
        }
    }
    Ok(serde_json::to_value(&reports).expect("reports serialize"))
}

/// `K_{4,2,2}(X_3 = T^100, X_4 = T^10000; T)` and the prefactor `p_{2,2}`.
fn fibre_fixture() -> Result<()> {
    let t = SignedMonomial::qt(0, 1);
    let k = fibre_k(4, 2, 2, &[SignedMonomial::qt(0, 100), SignedMonomial::qt(0, 10_000)], t)?;
    let terms: &[(i64, i64, u32)] = &[
        (1, 0, 0),
        (1, 2, 0),
        (1, -6, 1),
        (1, -5, 1),
        (1, -4, 1),
        (1, -3, 1),
        (1, -13, 2),
        (2, -11, 2),
        (2, -9, 2),
        (1, -7, 2),
        (1, -6, 100),
        (2, -4, 100),
        (2, -2, 100),
        (1, 0, 100),
        (1, -10, 101),
        (1, -9, 101),
        (1, -8, 101),
        (1, -7, 101),
        (1, -15, 102),
        (1, -13, 102),
    ];
    let expect_p = FactoredRational::new(Poly::q_pow(2), SignedMonomial::ONE, [(1, 0, 1), (3, 0, 1)]);
    if k != Poly::from_i64_terms(terms) || p_factor(2, 2) != expect_p {
        return Err(Error::IdentityMismatch("fixture K_{4,2,2}".into()));
    }
    Ok(())
}

fn fibre(n: usize) -> Result<Value> {
    let mut cases = Vec::new();
    for k in 0..=n {
        // the largest n only samples r in {0, 1, 2}
        let rs: Vec<i64> = if n < 4 { (-1..=2 * k as i64 + 2).collect() } else { vec![0, 1, 2] };
        for r in rs {
            check_i_equals_k(n, k, r)?;
            cases.push(format!("({n},{k},{r})"));
        }
    }
    if n == 4 {
        fibre_fixture()?;
        cases.push("fixture K_{4,2,2}".into());
    }
    Ok(json!({ "cases": cases }))
}

fn residue(n: usize) -> Result<Value> {
    for m in 0..=n {
        check_residue_identity(n, m)?;
    }
    Ok(json!(format!("L_(n,m) = (T;q)_2n A_m(T) for m = 0..{n}")))
}

fn reduced(n: usize) -> Result<Value> {
    let b = reduced_zeta_brenti(n)?;
    if b != reduced_zeta_eulerian(n)? {
        return Err(Error::IdentityMismatch(format!("Brenti vs Eulerian reduced forms at n={n}")));
    }
    let series: Vec<_> = b.series_in_t(10)?.iter().map(|p| p.coeff(0, 0)).collect();
    if series != reduced_cone_series(n, 10) {
        return Err(Error::IdentityMismatch(format!("reduced form vs cone series at n={n}")));
    }
    if b.invert_qt() != b.mul_monomial(SignedMonomial::new(-1, 0, 2 * n as i64 + 1)) {
        return Err(Error::IdentityMismatch(format!("self-reciprocity of the reduced form at n={n}")));
    }
    if n <= crate::zeta::THM_B_BOUND && zeta_thm_b(n)?.at_q_one()? != b {
        return Err(Error::IdentityMismatch(format!("q -> 1 limit vs reduced form at n={n}")));
    }
    Ok(json!("Brenti, Eulerian and cone-series forms agree; self-reciprocal; equals q -> 1 limit"))
}
