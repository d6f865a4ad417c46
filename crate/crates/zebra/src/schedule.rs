use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Thresholds used by the three-phase construction, all derived from `n`.
///
/// Real-valued formulas are floored; `l0`, `ell0` and `ell1` are clamped to at
/// least 1. Overridden values feed into the fields computed after them, so
/// overriding `t0` also moves `t2`, `t3` and `t4` unless those are overridden too.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSchedule {
    pub n: usize,
    pub t0: usize,
    pub t1: usize,
    pub t2: usize,
    pub t3: usize,
    pub t4: usize,
    pub zeta3: usize,
    pub zeta4: usize,
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    pub n0: usize,
    pub n0_prime: usize,
    pub n1: usize,
    pub nb: usize,
    pub nc: usize,
    pub l0: usize,
    pub l1: usize,
    pub ell0: usize,
    pub ell1: usize,
    pub nu_l: usize,
    /// Segment scale `n / ln n` used to size the Phase 3 break sets.
    pub segment_scale: usize,
    /// Cap on the used set during Phase 2, `10 * n^(11/12)` by default.
    pub w_budget: usize,
    pub overrides: BTreeMap<String, f64>,
}

/// Keys accepted by [`build_schedule`] overrides.
pub const OVERRIDE_KEYS: &[&str] = &[
    "t0", "t1", "t2", "t3", "t4", "zeta3", "zeta4", "p0", "p1", "p2", "n0", "n0_prime", "n1", "nb",
    "nc", "L0", "L1", "ell0", "ell1", "nuL", "segment_scale", "w_budget",
];

/// Default multiplier in the used-set budget `C * n^(11/12)`.
pub const W_BUDGET_CONSTANT: f64 = 10.0;

fn floor_count(x: f64) -> usize {
    if x.is_finite() && x > 0.0 {
        x.floor() as usize
    } else {
        0
    }
}

pub fn build_schedule(n: usize, overrides: &BTreeMap<String, f64>) -> Result<ParamSchedule> {
    if n < 4 || n % 2 == 1 {
        return invalid(format!("n must be even and at least 4, got {n}"));
    }
    for key in overrides.keys() {
        if !OVERRIDE_KEYS.contains(&key.as_str()) {
            return invalid(format!("unknown schedule field '{key}'"));
        }
    }
    for (key, &value) in overrides {
        if !value.is_finite() || value < 0.0 {
            return invalid(format!("override {key}={value} must be finite and non-negative"));
        }
    }
    let get = |key: &str, default: f64| overrides.get(key).copied().unwrap_or(default);
    let count = |key: &str, default: f64| match overrides.get(key) {
        Some(&v) => v.floor() as usize,
        None => floor_count(default),
    };

    let nf = n as f64;
    let ln = nf.ln();
    let lnln = ln.ln();
    let lnlnln = lnln.ln();
    let pairs = nf * (nf - 1.0) / 2.0;

    let t0 = count("t0", nf / 2.0 * (ln - 2.0 * lnln));
    let t1 = count("t1", nf / 2.0 * (ln + 2.0 * lnln));
    let t2 = count("t2", (t0 / 10) as f64);
    let t3 = count("t3", (t0 / 5) as f64);
    let t4 = count("t4", (9 * t0 / 10) as f64);
    let zeta3 = count("zeta3", t3.saturating_sub(t2) as f64);
    let zeta4 = count("zeta4", t4.saturating_sub(t3) as f64);
    let p0 = get("p0", t0 as f64 / pairs);
    let p1 = get("p1", t1 as f64 / pairs);
    let p2 = get("p2", t2 as f64 / pairs);
    let n0 = count("n0", nf / (ln * ln));
    let n0_prime = count("n0_prime", nf / (ln * ln) / ln.powi(4));
    let n1 = count("n1", nf / (10.0 * ln));
    let nb = count("nb", nf * lnlnln / lnln);
    let nc = count("nc", 200.0 * nf / ln);
    let l0 = count("L0", ln / 100.0).max(1);
    let l1 = count("L1", ln / lnln);
    let ell0 = count("ell0", ln / 200.0).max(1);
    let ell1 = count("ell1", 2.0 * ln / (3.0 * lnln)).max(1);
    let nu_l = match overrides.get("nuL") {
        Some(&v) => v.floor() as usize,
        None => ell0.checked_pow(ell1 as u32).unwrap_or(usize::MAX),
    };
    let segment_scale = count("segment_scale", nf / ln).max(1);
    let w_budget = count("w_budget", W_BUDGET_CONSTANT * nf.powf(11.0 / 12.0));

    Ok(ParamSchedule {
        n,
        t0,
        t1,
        t2,
        t3,
        t4,
        zeta3,
        zeta4,
        p0,
        p1,
        p2,
        n0,
        n0_prime,
        n1,
        nb,
        nc,
        l0,
        l1,
        ell0,
        ell1,
        nu_l,
        segment_scale,
        w_budget,
        overrides: overrides.clone(),
    })
}

impl ParamSchedule {
    /// Checks `t2 < t3 < t4 < t0 < t1` and `nu_l >= 1`.
    pub fn check_order(&self) -> Result<()> {
        let ts = [self.t2, self.t3, self.t4, self.t0, self.t1];
        if ts.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!(
                "thresholds must satisfy t2 < t3 < t4 < t0 < t1, got {:?}",
                ts
            ));
        }
        if self.nu_l == 0 {
            return invalid("nuL must be at least 1");
        }
        Ok(())
    }
}

/// Parses `KEY=VALUE` strings into an override map.
pub fn parse_overrides<S: AsRef<str>>(items: &[S]) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for item in items {
        let item = item.as_ref();
        let Some((k, v)) = item.split_once('=') else {
            return invalid(format!("override '{item}' is not KEY=VALUE"));
        };
        let value: f64 = match v.trim().parse() {
            Ok(x) => x,
            Err(_) => return invalid(format!("override '{item}' has a non-numeric value")),
        };
        map.insert(k.trim().to_string(), value);
    }
    Ok(map)
}

/// Overrides that make the three phases runnable on a trace of `len` edges at
/// desk scale. The default tranche boundaries leave most vertices in `V0`
/// below n ≈ 10⁵, so the boundaries are placed so that `G_{t2}` already has
/// average degree about 0.6 ln n, the rotation supply gets the largest share,
/// and the final tranche runs to the end of the trace.
pub fn desk_overrides(n: usize, len: usize) -> BTreeMap<String, f64> {
    let lenf = len as f64;
    let nf = n as f64;
    let ln = nf.ln();
    let mut m = BTreeMap::new();
    m.insert("t1".into(), lenf);
    m.insert("t0".into(), lenf);
    m.insert("t2".into(), (lenf * 0.3).floor());
    m.insert("t3".into(), (lenf * 0.4).floor());
    m.insert("t4".into(), (lenf * 0.85).floor());
    m.insert("L0".into(), 1.0);
    m.insert("nc".into(), (nf / ln).floor().max(4.0));
    m.insert("ell0".into(), 4.0);
    m.insert("ell1".into(), 4.0);
    m.insert("nuL".into(), 64.0);
    m
}

/// Overrides for running only the two surgery phases on a given 2-factor of
/// `n` vertices, as the r-zebraic pipeline does on its contracted graph.
pub fn surgery_desk_overrides(n: usize) -> BTreeMap<String, f64> {
    let nf = n as f64;
    let mut m = BTreeMap::new();
    m.insert("nc".into(), (nf / nf.ln()).floor().max(4.0));
    m.insert("ell0".into(), 4.0);
    m.insert("ell1".into(), 4.0);
    m.insert("nuL".into(), 64.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_or_small_n_rejected() {
        assert!(build_schedule(7, &BTreeMap::new()).is_err());
        assert!(build_schedule(2, &BTreeMap::new()).is_err());
    }

    #[test]
    fn thresholds_at_e_to_the_tenth() {
        let s = build_schedule(22026, &BTreeMap::new()).unwrap();
        let n = 22026f64;
        let expect = (n / 2.0 * (n.ln() - 2.0 * n.ln().ln())).floor() as usize;
        assert_eq!(s.t0, expect);
        assert!((59413..=59415).contains(&s.t0));
        assert_eq!(s.t2, s.t0 / 10);
        assert_eq!(s.t3, s.t0 / 5);
        assert_eq!(s.t4, 9 * s.t0 / 10);
        assert_eq!(s.zeta3, s.t3 - s.t2);
        assert!(s.check_order().is_ok());
    }

    #[test]
    fn overrides_pass_through() {
        let o = parse_overrides(&["L0=1", "ell0=1", "ell1=1"]).unwrap();
        let s = build_schedule(4, &o).unwrap();
        let plain = build_schedule(4, &BTreeMap::new()).unwrap();
        assert_eq!((s.l0, s.ell0, s.ell1), (1, 1, 1));
        assert_eq!(s.t0, plain.t0);
        assert_eq!(s.nu_l, 1);
    }

    #[test]
    fn t0_override_cascades() {
        let o = parse_overrides(&["t0=1000"]).unwrap();
        let s = build_schedule(100, &o).unwrap();
        assert_eq!((s.t2, s.t3, s.t4), (100, 200, 900));
    }

    #[test]
    fn unknown_key_rejected() {
        let o = parse_overrides(&["bogus=3"]).unwrap();
        assert!(build_schedule(10, &o).is_err());
        assert!(parse_overrides(&["t0"]).is_err());
    }
}
