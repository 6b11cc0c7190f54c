use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::search::{min_linear_code, DEFAULT_MAX_MATRICES};
use super::OracleError;
use crate::achievability::next_prime;
use crate::bounds::{closed_form_beta, has_two_level_subfamily, longest_chain_bound};
use crate::canon::RelabelTables;
use crate::engine::compute_l_star;
use crate::instance::{full_mask, PliableInstance, ReceiverSet};

/// Default largest `m` for [`sweep`].
pub const SWEEP_MAX_M: usize = 5;
/// Largest number of absent receivers per swept instance.
pub const SWEEP_MAX_ABSENT: usize = 4;

/// Limits for the exhaustive searches; the defaults keep a full sweep at
/// desk scale.
#[derive(Debug, Clone, Copy)]
pub struct OracleLimits {
    pub sweep_max_m: usize,
    pub max_matrices: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { sweep_max_m: SWEEP_MAX_M, max_matrices: DEFAULT_MAX_MATRICES }
    }
}

/// One canonical instance of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    #[serde(serialize_with = "instance_as_json")]
    pub instance: PliableInstance,
    pub n_absent: usize,
    pub lb_chain: usize,
    pub lb_algo: usize,
    pub closed_form: Option<usize>,
    pub oracle_len: Option<usize>,
    /// Field of the reported `oracle_len`; larger than the requested `q` only
    /// after a mismatch.
    pub oracle_q: u32,
    /// Whether a perfect 2-nested or 1-truncated 3-nested subfamily exists.
    pub two_level: bool,
    /// `closed_form == oracle_len`, or true when there is no closed form.
    pub agree: bool,
}

fn instance_as_json<S: serde::Serializer>(inst: &PliableInstance, s: S) -> Result<S::Ok, S::Error> {
    inst.to_value().serialize(s)
}

impl SweepRecord {
    /// The absent family as `{..};{..}`, in canonical order.
    pub fn canonical_absent(&self) -> String {
        self.instance.absent().iter().map(ReceiverSet::to_string).collect::<Vec<_>>().join(";")
    }
}

/// Every instance on `m` messages with at most `max_absent` absent receivers
/// that is lexicographically least under relabeling, ordered by family size
/// and then by bitmask tuple.
///
/// A sorted prefix of a canonical family is itself canonical, so families
/// are grown one receiver at a time and non-canonical prefixes are cut.
pub fn canonical_families(m: usize, max_absent: usize) -> Vec<PliableInstance> {
    let tables = RelabelTables::new(m);
    let full = full_mask(m);
    let mut out: Vec<Vec<u32>> = Vec::new();
    fn grow(tables: &RelabelTables, full: u32, max: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        if cur.len() == max {
            return;
        }
        let from = cur.last().map_or(0, |&h| h + 1);
        for h in from..full {
            cur.push(h);
            if tables.is_canonical(cur) {
                grow(tables, full, max, cur, out);
            }
            cur.pop();
        }
    }
    grow(&tables, full, max_absent, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.into_iter()
        .map(|masks| PliableInstance::new(m, masks.into_iter().map(ReceiverSet::from_mask)).expect("proper subsets"))
        .collect()
}

/// Runs the oracle against the closed form on every canonical instance.
/// A mismatch over `GF(q)` is retried over the next prime field.
pub fn sweep(m: usize, max_absent: usize, q: u32) -> Result<Vec<SweepRecord>, OracleError> {
    sweep_with_limits(m, max_absent, q, &OracleLimits::default())
}

pub fn sweep_with_limits(m: usize, max_absent: usize, q: u32, limits: &OracleLimits) -> Result<Vec<SweepRecord>, OracleError> {
    if m == 0 || m > limits.sweep_max_m {
        return Err(OracleError::TooLarge { m, cap: limits.sweep_max_m });
    }
    if max_absent > SWEEP_MAX_ABSENT {
        return Err(OracleError::TooManyAbsent { max_absent, cap: SWEEP_MAX_ABSENT });
    }
    if !crate::achievability::is_prime(q) {
        return Err(OracleError::NotPrime(q));
    }
    canonical_families(m, max_absent)
        .into_par_iter()
        .map(|inst| sweep_one(inst, q, limits))
        .collect()
}

fn sweep_one(inst: PliableInstance, q: u32, limits: &OracleLimits) -> Result<SweepRecord, OracleError> {
    let m = inst.m();
    let closed_form = closed_form_beta(&inst);
    let mut oracle_q = q;
    let mut oracle_len = min_linear_code(&inst, q, m, limits.max_matrices)?.map(|c| c.len());
    if closed_form.is_some() && oracle_len != closed_form {
        oracle_q = next_prime(q + 1);
        oracle_len = min_linear_code(&inst, oracle_q, m, limits.max_matrices)?.map(|c| c.len());
    }
    let lb_algo = m - compute_l_star(&inst).map_err(OracleError::Chain)?;
    Ok(SweepRecord {
        n_absent: inst.absent_count(),
        lb_chain: longest_chain_bound(&inst),
        lb_algo,
        closed_form,
        oracle_len,
        oracle_q,
        two_level: has_two_level_subfamily(&inst),
        agree: closed_form.is_none_or(|c| Some(c) == oracle_len),
        instance: inst,
    })
}

/// CSV with columns `canonical_absent, n_absent, lb_chain, lb_algo,
/// closed_form, oracle_len, agree`; missing values are empty cells.
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<(), OracleError> {
    let mut w = csv::Writer::from_writer(out);
    let opt = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
    w.write_record(["canonical_absent", "n_absent", "lb_chain", "lb_algo", "closed_form", "oracle_len", "agree"])?;
    for r in records {
        w.write_record([
            r.canonical_absent(),
            r.n_absent.to_string(),
            r.lb_chain.to_string(),
            r.lb_algo.to_string(),
            opt(r.closed_form),
            opt(r.oracle_len),
            r.agree.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_json<W: Write>(records: &[SweepRecord], out: W) -> Result<(), OracleError> {
    serde_json::to_writer_pretty(out, records).map_err(|e| OracleError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_absent_orbits() {
        let fams = canonical_families(3, 1);
        let singles: Vec<_> = fams.iter().filter(|i| i.absent_count() == 1).collect();
        assert_eq!(singles.len(), 3);
        assert_eq!(fams.len(), 4);
    }

    #[test]
    fn enumeration_matches_brute_orbits() {
        use crate::canon::canonicalize;
        use std::collections::BTreeSet;
        let m = 3;
        let mut orbits = BTreeSet::new();
        for fam in 0u32..(1 << 7) {
            if fam.count_ones() <= 3 {
                let sets = (0..7).filter(|&i| fam >> i & 1 == 1).map(ReceiverSet::from_mask);
                let inst = PliableInstance::new(m, sets).unwrap();
                orbits.insert(canonicalize(&inst).0.absent().to_vec());
            }
        }
        let fams: BTreeSet<_> = canonical_families(m, 3).iter().map(|i| i.absent().to_vec()).collect();
        assert_eq!(fams, orbits);
    }

    #[test]
    fn small_sweep_agrees() {
        let records = sweep(3, 2, 2).unwrap();
        assert!(records.iter().all(|r| r.agree));
        let mut csv = Vec::new();
        write_sweep_csv(&records, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("canonical_absent,n_absent,lb_chain,lb_algo,closed_form,oracle_len,agree\n"));
        assert_eq!(text.lines().count(), records.len() + 1);
    }

    #[test]
    fn caps() {
        assert!(matches!(sweep(6, 2, 2), Err(OracleError::TooLarge { .. })));
        assert!(matches!(sweep(4, 5, 2), Err(OracleError::TooManyAbsent { .. })));
        assert!(matches!(sweep(4, 2, 4), Err(OracleError::NotPrime(4))));
    }
}
