//! FCIDUMP reader and writer.
//!
//! Header: `&FCI NORB=.., NELEC=.., MS2=.. [ORBSYM=..] [ISYM=..] &END` (or `/`).
//! Body: `value i j k l` with 1-based indices; `0 0 0 0` is the nuclear
//! repulsion, `i j 0 0` a one-electron integral, anything else `(ij|kl)` in
//! chemist notation. `i 0 0 0` (orbital energies) is accepted and ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Spatial-orbital integrals in Hartree.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularIntegrals {
    pub n_orb: usize,
    pub n_elec: usize,
    pub ms2: i64,
    pub e_nuc: f64,
    h: Vec<f64>,
    eri: Vec<f64>,
}

const DUPLICATE_TOL: f64 = 1e-10;

impl MolecularIntegrals {
    pub fn new(n_orb: usize, n_elec: usize, ms2: i64, e_nuc: f64) -> Self {
        MolecularIntegrals {
            n_orb,
            n_elec,
            ms2,
            e_nuc,
            h: vec![0.0; n_orb * n_orb],
            eri: vec![0.0; n_orb.pow(4)],
        }
    }

    pub fn h(&self, p: usize, q: usize) -> f64 {
        self.h[p * self.n_orb + q]
    }

    /// `(pq|rs)`
    pub fn eri(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_orb;
        self.eri[((p * n + q) * n + r) * n + s]
    }

    pub fn set_h(&mut self, p: usize, q: usize, value: f64) {
        let n = self.n_orb;
        self.h[p * n + q] = value;
        self.h[q * n + p] = value;
    }

    /// Writes all eight real-orbital permutations of `(pq|rs)`.
    pub fn set_eri(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        let n = self.n_orb;
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            self.eri[((a * n + b) * n + c) * n + d] = value;
        }
    }

    pub fn n_alpha(&self) -> usize {
        ((self.n_elec as i64 + self.ms2) / 2) as usize
    }

    pub fn n_beta(&self) -> usize {
        ((self.n_elec as i64 - self.ms2) / 2) as usize
    }

    /// FCIDUMP text with one entry per permutation class.
    pub fn to_fcidump(&self) -> String {
        let n = self.n_orb;
        let mut out = String::new();
        let orbsym = vec!["1"; n].join(",");
        let _ = writeln!(out, " &FCI NORB={n},NELEC={},MS2={},", self.n_elec, self.ms2);
        let _ = writeln!(out, "  ORBSYM={orbsym},");
        let _ = writeln!(out, "  ISYM=1,");
        let _ = writeln!(out, " &END");
        for p in 0..n {
            for q in 0..=p {
                for r in 0..n {
                    for s in 0..=r {
                        if p * (p + 1) / 2 + q < r * (r + 1) / 2 + s {
                            continue;
                        }
                        let v = self.eri(p, q, r, s);
                        if v != 0.0 {
                            let _ = writeln!(out, "{v:?} {} {} {} {}", p + 1, q + 1, r + 1, s + 1);
                        }
                    }
                }
            }
        }
        for p in 0..n {
            for q in 0..=p {
                let v = self.h(p, q);
                if v != 0.0 {
                    let _ = writeln!(out, "{v:?} {} {} 0 0", p + 1, q + 1);
                }
            }
        }
        let _ = writeln!(out, "{:?} 0 0 0 0", self.e_nuc);
        out
    }
}

fn parse_float(tok: &str) -> Result<f64> {
    let v: f64 = tok
        .replace(['D', 'd'], "E")
        .parse()
        .map_err(|_| Error::Fcidump(format!("bad number {tok:?}")))?;
    if !v.is_finite() {
        return Err(Error::Fcidump(format!("non-finite value {tok:?}")));
    }
    Ok(v)
}

struct Header {
    norb: usize,
    nelec: usize,
    ms2: i64,
    body_start: usize,
}

fn parse_header(text: &str) -> Result<Header> {
    let upper = text.to_ascii_uppercase();
    let start = upper
        .find("&FCI")
        .ok_or_else(|| Error::Fcidump("missing &FCI namelist".into()))?
        + 4;
    let rest = &upper[start..];
    let (len, term_len) = match (rest.find("&END"), rest.find('/')) {
        (Some(a), Some(b)) if b < a => (b, 1),
        (Some(a), _) => (a, 4),
        (None, Some(b)) => (b, 1),
        (None, None) => return Err(Error::Fcidump("unterminated &FCI namelist".into())),
    };
    let body = rest[..len].replace('=', " = ").replace(',', " ");
    let toks: Vec<&str> = body.split_whitespace().collect();
    let mut fields: Vec<(&str, Vec<&str>)> = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        if i + 1 < toks.len() && toks[i + 1] == "=" {
            fields.push((toks[i], Vec::new()));
            i += 2;
        } else if let Some(last) = fields.last_mut() {
            last.1.push(toks[i]);
            i += 1;
        } else {
            return Err(Error::Fcidump(format!("unexpected token {:?} in header", toks[i])));
        }
    }
    let scalar = |key: &str| -> Result<Option<i64>> {
        match fields.iter().find(|(k, _)| *k == key) {
            None => Ok(None),
            Some((_, v)) if v.len() == 1 => v[0]
                .parse()
                .map(Some)
                .map_err(|_| Error::Fcidump(format!("bad value for {key}: {:?}", v[0]))),
            Some((_, v)) => Err(Error::Fcidump(format!("{key} expects one value, got {}", v.len()))),
        }
    };
    let norb = scalar("NORB")?.ok_or_else(|| Error::Fcidump("NORB missing".into()))?;
    let nelec = scalar("NELEC")?.ok_or_else(|| Error::Fcidump("NELEC missing".into()))?;
    let ms2 = scalar("MS2")?.unwrap_or(0);
    if norb <= 0 || nelec < 0 || (nelec + ms2) % 2 != 0 || ms2.abs() > nelec || nelec > 2 * norb {
        return Err(Error::Fcidump(format!("inconsistent header NORB={norb} NELEC={nelec} MS2={ms2}")));
    }
    Ok(Header { norb: norb as usize, nelec: nelec as usize, ms2, body_start: start + len + term_len })
}

pub fn parse_fcidump(text: &str) -> Result<MolecularIntegrals> {
    let header = parse_header(text)?;
    let n = header.norb;
    let mut ints = MolecularIntegrals::new(n, header.nelec, header.ms2, 0.0);
    let mut seen_h = vec![false; n * n];
    let mut seen_eri = vec![false; n.pow(4)];
    let mut seen_nuc = false;

    let toks: Vec<&str> = text[header.body_start..].split_whitespace().collect();
    if toks.len() % 5 != 0 {
        return Err(Error::Fcidump(format!("integral block has {} tokens, not a multiple of 5", toks.len())));
    }
    for rec in toks.chunks(5) {
        let value = parse_float(rec[0])?;
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&rec[1..]) {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Fcidump(format!("bad orbital index {tok:?}")))?;
            if v > n {
                return Err(Error::Fcidump(format!("orbital index {v} outside [1, {n}]")));
            }
            *slot = v;
        }
        let check = |seen: &mut bool, old: f64| -> Result<()> {
            if *seen && (old - value).abs() > DUPLICATE_TOL {
                return Err(Error::Fcidump(format!(
                    "contradictory duplicate entry {} {} {} {}: {old} vs {value}",
                    idx[0], idx[1], idx[2], idx[3]
                )));
            }
            *seen = true;
            Ok(())
        };
        match idx {
            [0, 0, 0, 0] => {
                check(&mut seen_nuc, ints.e_nuc)?;
                ints.e_nuc = value;
            }
            [i, 0, 0, 0] if i > 0 => {}
            [i, j, 0, 0] if i > 0 && j > 0 => {
                let (p, q) = (i - 1, j - 1);
                let (a, b) = (p.max(q), p.min(q));
                check(&mut seen_h[a * n + b], ints.h(p, q))?;
                ints.set_h(p, q, value);
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (p, q, r, s) = (i - 1, j - 1, k - 1, l - 1);
                let pq = (p.max(q), p.min(q));
                let rs = (r.max(s), r.min(s));
                let (x, y) = if pq >= rs { (pq, rs) } else { (rs, pq) };
                let key = ((x.0 * n + x.1) * n + y.0) * n + y.1;
                check(&mut seen_eri[key], ints.eri(p, q, r, s))?;
                ints.set_eri(p, q, r, s, value);
            }
            _ => {
                return Err(Error::Fcidump(format!(
                    "unrecognised index pattern {} {} {} {}",
                    idx[0], idx[1], idx[2], idx[3]
                )))
            }
        }
    }
    Ok(ints)
}
