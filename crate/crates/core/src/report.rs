//! `bounds-report` rows (CSV and JSON) and an order-independent summary.

use std::collections::BTreeMap;
use std::io::Write;

use num_rational::BigRational;
use serde::Serialize;

use crate::bounds::BoundReport;
use crate::error::Result;

/// One `bounds-report` row:
/// `name,N,K,lhs_num,lhs_den,rhs_num,rhs_den,margin_sign,pass`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub name: String,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "K")]
    pub k: Option<u64>,
    pub lhs_num: String,
    pub lhs_den: String,
    pub rhs_num: String,
    pub rhs_den: String,
    pub margin_sign: i8,
    pub pass: bool,
}

impl From<&BoundReport> for BoundRow {
    fn from(rep: &BoundReport) -> Self {
        BoundRow {
            name: rep.name.clone(),
            n: rep.n,
            k: rep.k,
            lhs_num: rep.lhs.numer().to_string(),
            lhs_den: rep.lhs.denom().to_string(),
            rhs_num: rep.rhs.numer().to_string(),
            rhs_den: rep.rhs.denom().to_string(),
            margin_sign: rep.margin_sign(),
            pass: rep.pass,
        }
    }
}

pub const CSV_HEADER: &str = "name,N,K,lhs_num,lhs_den,rhs_num,rhs_den,margin_sign,pass";

pub fn write_csv<W: Write>(reports: &[BoundReport], out: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    wtr.write_record(CSV_HEADER.split(','))?;
    for rep in reports {
        wtr.serialize(BoundRow::from(rep))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(reports: &[BoundReport], mut out: W) -> Result<()> {
    let rows: Vec<BoundRow> = reports.iter().map(BoundRow::from).collect();
    serde_json::to_writer_pretty(&mut out, &rows)?;
    writeln!(out)?;
    Ok(())
}

/// Per-family tally of checks, failures and the tightest margin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySummary {
    pub checked: u64,
    pub failed: u64,
    pub min_margin: BigRational,
    /// Smallest `N` attaining `min_margin`.
    pub min_margin_at: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub families: BTreeMap<String, FamilySummary>,
}

impl Summary {
    pub fn add(&mut self, rep: &BoundReport) {
        let fresh = FamilySummary {
            checked: 1,
            failed: u64::from(!rep.pass),
            min_margin: rep.margin.clone(),
            min_margin_at: rep.n,
        };
        match self.families.get_mut(&rep.name) {
            Some(fam) => fam.merge(fresh),
            None => {
                self.families.insert(rep.name.clone(), fresh);
            }
        }
    }

    pub fn merge(&mut self, other: Summary) {
        for (name, fam) in other.families {
            match self.families.get_mut(&name) {
                Some(mine) => mine.merge(fam),
                None => {
                    self.families.insert(name, fam);
                }
            }
        }
    }

    pub fn all_pass(&self) -> bool {
        self.families.values().all(|f| f.failed == 0)
    }

    pub fn total_checked(&self) -> u64 {
        self.families.values().map(|f| f.checked).sum()
    }
}

impl FamilySummary {
    fn merge(&mut self, other: FamilySummary) {
        self.checked += other.checked;
        self.failed += other.failed;
        let better = other.min_margin < self.min_margin
            || (other.min_margin == self.min_margin && other.min_margin_at < self.min_margin_at);
        if better {
            self.min_margin = other.min_margin;
            self.min_margin_at = other.min_margin_at;
        }
    }
}

impl<'a> FromIterator<&'a BoundReport> for Summary {
    fn from_iter<I: IntoIterator<Item = &'a BoundReport>>(iter: I) -> Self {
        let mut s = Summary::default();
        for rep in iter {
            s.add(rep);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{int, ratio, Direction};

    fn sample() -> Vec<BoundReport> {
        vec![
            BoundReport::new(
                "first_upper",
                8,
                Some(3),
                Direction::Upper,
                int(12),
                ratio(139, 8),
            ),
            BoundReport::new("refined_lower", 8, None, Direction::Lower, int(18), int(14)),
            BoundReport::new("refined_lower", 9, None, Direction::Lower, int(1), int(2)),
        ]
    }

    #[test]
    fn csv_rows() {
        let mut out = Vec::new();
        write_csv(&sample(), &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "name,N,K,lhs_num,lhs_den,rhs_num,rhs_den,margin_sign,pass\n\
             first_upper,8,3,12,1,139,8,1,true\n\
             refined_lower,8,,18,1,14,1,1,true\n\
             refined_lower,9,,1,1,2,1,-1,false\n"
        );
    }

    #[test]
    fn json_mirrors_csv_fields() {
        let mut out = Vec::new();
        write_json(&sample()[..1], &mut out).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        let row = &v[0];
        let keys: Vec<&str> = row
            .as_object()
            .unwrap()
            .keys()
            .map(|s| s.as_str())
            .collect();
        let mut expected: Vec<&str> = CSV_HEADER.split(',').collect();
        expected.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, expected);
        assert_eq!(row["rhs_num"], "139");
        assert_eq!(row["K"], 3);
    }

    #[test]
    fn summary_is_order_independent() {
        let reps = sample();
        let forward: Summary = reps.iter().collect();
        let backward: Summary = reps.iter().rev().collect();
        assert_eq!(forward, backward);
        assert!(!forward.all_pass());
        assert_eq!(forward.total_checked(), 3);
        let fam = &forward.families["refined_lower"];
        assert_eq!((fam.checked, fam.failed, fam.min_margin_at), (2, 1, 9));

        let mut split: Summary = reps[..1].iter().collect();
        split.merge(reps[1..].iter().collect());
        assert_eq!(split, forward);
    }
}
