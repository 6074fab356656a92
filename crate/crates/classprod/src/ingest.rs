//! Parsers for externally supplied group data (permutation and matrix
//! generator files, straight-line programs) and the checksum-gated fetcher.
//!
//! All file formats are 1-based on disk, converted to 0-based at the parser
//! boundary and nowhere else.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use classprod_core::{Mat, Perm};
use sha2::{Digest, Sha256};

use crate::error::AppError;

/// First line "perm <degree> <count>", then `count` lines of `degree`
/// space-separated 1-based images.
pub fn parse_images(text: &str) -> Result<Vec<Perm>, AppError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("perm") {
        return Err(bad("expected 'perm <degree> <count>' header"));
    }
    let degree: usize = parse_num(it.next(), "degree")?;
    let count: usize = parse_num(it.next(), "count")?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let line = lines.next().ok_or_else(|| bad("missing generator line"))?;
        let mut img = Vec::with_capacity(degree);
        for tok in line.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| bad("bad image value"))?;
            if v == 0 || v > degree {
                return Err(bad("image out of range"));
            }
            img.push((v - 1) as u16);
        }
        if img.len() != degree {
            return Err(bad("wrong number of images"));
        }
        out.push(Perm::from_images(img)?);
    }
    Ok(out)
}

pub fn serialize_images(perms: &[Perm]) -> String {
    let degree = perms.first().map_or(0, |p| p.degree());
    let mut s = format!("perm {} {}\n", degree, perms.len());
    for p in perms {
        let line: Vec<String> = p.images().iter().map(|&i| (i + 1).to_string()).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

/// Header "deg <n>", then one permutation per line in disjoint-cycle notation
/// "(1,2,3)(4,5)"; unmentioned points are fixed, "()" is the identity.
pub fn parse_cycles(text: &str) -> Result<Vec<Perm>, AppError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("deg") {
        return Err(bad("expected 'deg <n>' header"));
    }
    let degree: usize = parse_num(it.next(), "degree")?;
    let mut out = Vec::new();
    for line in lines {
        let mut img: Vec<u16> = (0..degree as u16).collect();
        let mut used = vec![false; degree];
        for cyc in line.trim().split(')') {
            let cyc = cyc.trim().trim_start_matches('(');
            if cyc.is_empty() {
                continue;
            }
            let pts: Vec<usize> = cyc
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad("bad cycle point")))
                .collect::<Result<_, _>>()?;
            for &p in &pts {
                if p == 0 || p > degree {
                    return Err(bad("cycle point exceeds degree"));
                }
                if used[p - 1] {
                    return Err(bad("repeated point in cycle line"));
                }
                used[p - 1] = true;
            }
            for w in 0..pts.len() {
                img[pts[w] - 1] = (pts[(w + 1) % pts.len()] - 1) as u16;
            }
        }
        out.push(Perm::from_images(img)?);
    }
    Ok(out)
}

pub fn serialize_cycles(perms: &[Perm]) -> String {
    let degree = perms.first().map_or(0, |p| p.degree());
    let mut s = format!("deg {degree}\n");
    for p in perms {
        let mut seen = vec![false; degree];
        let mut line = String::new();
        for start in 0..degree as u16 {
            if seen[start as usize] || p.apply(start) == start {
                seen[start as usize] = true;
                continue;
            }
            let mut cyc = vec![start];
            seen[start as usize] = true;
            let mut cur = p.apply(start);
            while cur != start {
                seen[cur as usize] = true;
                cyc.push(cur);
                cur = p.apply(cur);
            }
            let pts: Vec<String> = cyc.iter().map(|&i| (i + 1).to_string()).collect();
            let _ = write!(line, "({})", pts.join(","));
        }
        if line.is_empty() {
            line.push_str("()");
        }
        let _ = writeln!(s, "{line}");
    }
    s
}

/// Header "mat <p> <n> <count>", then count blocks of n lines of n digits.
pub fn parse_matrix_text(text: &str) -> Result<Vec<Mat>, AppError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("mat") {
        return Err(bad("expected 'mat <p> <n> <count>' header"));
    }
    let p: u8 = parse_num(it.next(), "characteristic")? as u8;
    let n: usize = parse_num(it.next(), "dimension")?;
    let count: usize = parse_num(it.next(), "count")?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut m = Mat::zero(p, n);
        for i in 0..n {
            let line = lines.next().ok_or_else(|| bad("missing matrix row"))?;
            let digits: Vec<u8> = line
                .trim()
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| bad("non-digit entry")))
                .collect::<Result<_, _>>()?;
            if digits.len() != n {
                return Err(bad("wrong row length"));
            }
            for (j, &d) in digits.iter().enumerate() {
                if d >= p {
                    return Err(bad("digit exceeds characteristic"));
                }
                m.set(i, j, d);
            }
        }
        if !m.is_invertible() {
            return Err(bad("singular matrix block"));
        }
        out.push(m);
    }
    Ok(out)
}

pub fn serialize_matrix_text(mats: &[Mat]) -> String {
    let (p, n) = mats.first().map_or((2, 0), |m| (m.p, m.n));
    let mut s = format!("mat {} {} {}\n", p, n, mats.len());
    for m in mats {
        for i in 0..n {
            for j in 0..n {
                let _ = write!(s, "{}", m.get(i, j));
            }
            s.push('\n');
        }
    }
    s
}

/// Straight-line program over named registers. Instructions, one per line:
/// `inp <r>` (bind next input), `mu <a> <b> <c>` (c = a*b), `iv <a> <b>`
/// (b = a^-1), `pw <a> <e> <b>` (b = a^e, e = 0 giving the identity), and
/// `oup <r>` (append register to the outputs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlpInstr {
    Input(String),
    Mul(String, String, String),
    Inv(String, String),
    Pow(String, u64, String),
    Output(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SlProgram {
    pub instrs: Vec<SlpInstr>,
}

pub fn parse_slp(text: &str) -> Result<SlProgram, AppError> {
    let mut instrs = Vec::new();
    let mut defined: std::collections::HashSet<String> = Default::default();
    let mut outputs = 0usize;
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let need = |reg: &str| -> Result<(), AppError> {
            if defined.contains(reg) {
                Ok(())
            } else {
                Err(bad(&format!("undefined register '{reg}'")))
            }
        };
        let instr = match toks.as_slice() {
            ["inp", r] => {
                defined.insert(r.to_string());
                SlpInstr::Input(r.to_string())
            }
            ["mu", a, b, c] => {
                need(a)?;
                need(b)?;
                defined.insert(c.to_string());
                SlpInstr::Mul(a.to_string(), b.to_string(), c.to_string())
            }
            ["iv", a, b] => {
                need(a)?;
                defined.insert(b.to_string());
                SlpInstr::Inv(a.to_string(), b.to_string())
            }
            ["pw", a, e, b] => {
                need(a)?;
                let e: u64 = e.parse().map_err(|_| bad("bad exponent"))?;
                defined.insert(b.to_string());
                SlpInstr::Pow(a.to_string(), e, b.to_string())
            }
            ["oup", r] => {
                need(r)?;
                outputs += 1;
                SlpInstr::Output(r.to_string())
            }
            _ => return Err(bad(&format!("unrecognized instruction '{line}'"))),
        };
        instrs.push(instr);
    }
    if outputs == 0 {
        return Err(bad("program has no outputs"));
    }
    Ok(SlProgram { instrs })
}

pub fn serialize_slp(prog: &SlProgram) -> String {
    let mut s = String::new();
    for i in &prog.instrs {
        let _ = match i {
            SlpInstr::Input(r) => writeln!(s, "inp {r}"),
            SlpInstr::Mul(a, b, c) => writeln!(s, "mu {a} {b} {c}"),
            SlpInstr::Inv(a, b) => writeln!(s, "iv {a} {b}"),
            SlpInstr::Pow(a, e, b) => writeln!(s, "pw {a} {e} {b}"),
            SlpInstr::Output(r) => writeln!(s, "oup {r}"),
        };
    }
    s
}

/// Minimal group interface for SLP evaluation.
pub trait SlpElement: Clone {
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn identity_like(&self) -> Self;
}

impl SlpElement for Perm {
    fn mul(&self, other: &Self) -> Self {
        self.compose(other)
    }
    fn inv(&self) -> Self {
        self.inverse()
    }
    fn identity_like(&self) -> Self {
        Perm::identity(self.degree())
    }
}

impl SlpElement for Mat {
    fn mul(&self, other: &Self) -> Self {
        Mat::mul(self, other)
    }
    fn inv(&self) -> Self {
        self.inverse().expect("SLP inputs are invertible")
    }
    fn identity_like(&self) -> Self {
        Mat::identity(self.p, self.n)
    }
}

pub fn eval_slp<T: SlpElement>(prog: &SlProgram, inputs: &[T]) -> Result<Vec<T>, AppError> {
    let mut regs: std::collections::HashMap<String, T> = Default::default();
    let mut next_input = 0usize;
    let mut outputs = Vec::new();
    let get = |regs: &std::collections::HashMap<String, T>, r: &str| -> Result<T, AppError> {
        regs.get(r).cloned().ok_or_else(|| bad(&format!("undefined register '{r}'")))
    };
    for instr in &prog.instrs {
        match instr {
            SlpInstr::Input(r) => {
                let v = inputs
                    .get(next_input)
                    .ok_or_else(|| bad("more inp instructions than inputs"))?
                    .clone();
                next_input += 1;
                regs.insert(r.clone(), v);
            }
            SlpInstr::Mul(a, b, c) => {
                let v = get(&regs, a)?.mul(&get(&regs, b)?);
                regs.insert(c.clone(), v);
            }
            SlpInstr::Inv(a, b) => {
                let v = get(&regs, a)?.inv();
                regs.insert(b.clone(), v);
            }
            SlpInstr::Pow(a, e, b) => {
                let base = get(&regs, a)?;
                let mut acc = base.identity_like();
                for _ in 0..*e {
                    acc = acc.mul(&base);
                }
                regs.insert(b.clone(), acc);
            }
            SlpInstr::Output(r) => outputs.push(get(&regs, r)?),
        }
    }
    Ok(outputs)
}

pub fn sha256_hex(data: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(data);
    let digest = h.finalize();
    let mut s = String::with_capacity(64);
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Outcome of looking for a gated data file.
pub enum Fetched {
    File(PathBuf),
    /// not present anywhere and no source configured: the scenario gates
    Missing { name: String },
}

/// Resolve a named data file: the data dir first, then the cache dir, then a
/// copy from `base_url` (a local directory path; there is no network client —
/// point CLASSPROD_BASE_URL or --data-dir at a directory holding the files).
/// When `checksum` is given the file content must hash to it.
pub fn fetch(
    name: &str,
    data_dir: &Path,
    cache_dir: &Path,
    base_url: Option<&str>,
    checksum: Option<&str>,
) -> Result<Fetched, AppError> {
    let verify = |path: &Path| -> Result<Fetched, AppError> {
        if let Some(want) = checksum {
            let got = sha256_hex(&fs::read(path)?);
            if got != want {
                return Err(AppError::Checksum {
                    name: name.to_string(),
                    want: want.to_string(),
                    got,
                });
            }
        }
        Ok(Fetched::File(path.to_path_buf()))
    };
    let direct = data_dir.join(name);
    if direct.is_file() {
        return verify(&direct);
    }
    let cached = cache_dir.join("data").join(name);
    if cached.is_file() {
        return verify(&cached);
    }
    if let Some(base) = base_url {
        let src = Path::new(base).join(name);
        if src.is_file() {
            fs::create_dir_all(cached.parent().unwrap())?;
            let tmp = cached.with_extension("tmp");
            fs::copy(&src, &tmp)?;
            fs::rename(&tmp, &cached)?;
            return verify(&cached);
        }
    }
    Ok(Fetched::Missing { name: name.to_string() })
}

fn bad(msg: &str) -> AppError {
    AppError::Parse(msg.to_string())
}

fn parse_num(tok: Option<&str>, what: &str) -> Result<usize, AppError> {
    tok.ok_or_else(|| bad(&format!("missing {what}")))?
        .parse()
        .map_err(|_| bad(&format!("bad {what}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn images_basic() {
        let ps = parse_images("perm 3 1\n2 3 1\n").unwrap();
        assert_eq!(ps[0].images(), &[1, 2, 0]);
        assert!(parse_images("perm 3 1\n1 1 2\n").is_err());
        assert!(parse_images("perm 3 1\n1 2 4\n").is_err());
    }

    #[test]
    fn cycles_basic() {
        let ps = parse_cycles("deg 4\n(1,2)\n()\n(1,2,3)(4)\n").unwrap();
        assert_eq!(ps[0].images(), &[1, 0, 2, 3]);
        assert!(ps[1].is_identity());
        assert_eq!(ps[2].images(), &[1, 2, 0, 3]);
        assert!(parse_cycles("deg 4\n(1,2)(2,3)\n").is_err());
        assert!(parse_cycles("deg 4\n(1,5)\n").is_err());
    }

    #[test]
    fn matrix_basic() {
        let ms = parse_matrix_text("mat 2 2 1\n10\n01\n").unwrap();
        assert!(ms[0].is_identity());
        assert!(parse_matrix_text("mat 2 2 1\n10\n10\n").is_err());
        assert!(parse_matrix_text("mat 2 2 1\n12\n01\n").is_err());
    }

    #[test]
    fn slp_square() {
        let prog = parse_slp("inp a\nmu a a b\noup b\n").unwrap();
        let g = Perm::from_images(vec![1, 2, 0]).unwrap();
        let out = eval_slp(&prog, &[g.clone()]).unwrap();
        assert_eq!(out[0], g.compose(&g));
        // exponent 0 yields the identity
        let prog = parse_slp("inp a\npw a 0 b\noup b\n").unwrap();
        assert!(eval_slp(&prog, &[g]).unwrap()[0].is_identity());
        assert!(parse_slp("mu a a b\noup b\n").is_err());
        assert!(parse_slp("inp a\n").is_err());
    }

    #[test]
    fn roundtrips() {
        let ps = parse_cycles("deg 6\n(1,2,3)(4,5)\n(2,6)\n").unwrap();
        assert_eq!(parse_cycles(&serialize_cycles(&ps)).unwrap(), ps);
        assert_eq!(parse_images(&serialize_images(&ps)).unwrap(), ps);
        let ms = parse_matrix_text("mat 3 2 2\n12\n01\n21\n11\n").unwrap();
        assert_eq!(parse_matrix_text(&serialize_matrix_text(&ms)).unwrap(), ms);
        let prog = parse_slp("inp a\ninp b\nmu a b c\niv c d\npw d 3 e\noup e\n").unwrap();
        assert_eq!(parse_slp(&serialize_slp(&prog)).unwrap(), prog);
    }
}
