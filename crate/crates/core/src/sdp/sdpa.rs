//! SDPA sparse format (`.dat-s`) and CSDP-style solution files.
//!
//! Layout written: `m`, `nblocks`, the block sizes (diagonal blocks
//! negative), the `m` costs, then `matno blkno i j value` lines with 1-based
//! indices and `i <= j`. Values use the shortest decimal that round-trips.

use std::fmt::Write as _;

use super::{BlockKind, BlockMatrix, BlockSpec, BlockValue, SdpEntry, SdpProblem};
use crate::error::{Error, Result};

fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

/// Writes [`write_sdpa`] output to `path`.
pub fn export_sdpa(p: &SdpProblem<f64>, path: impl AsRef<std::path::Path>) -> Result<()> {
    std::fs::write(path, write_sdpa(p))?;
    Ok(())
}

pub fn write_sdpa(p: &SdpProblem<f64>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", p.c.len());
    let _ = writeln!(out, "{}", p.blocks.len());
    let sizes: Vec<String> = p
        .blocks
        .iter()
        .map(|b| match b.kind {
            BlockKind::Psd => b.size.to_string(),
            BlockKind::Diagonal => format!("-{}", b.size),
        })
        .collect();
    let _ = writeln!(out, "{}", sizes.join(" "));
    let costs: Vec<String> = p.c.iter().map(|&v| fmt_value(v)).collect();
    let _ = writeln!(out, "{}", costs.join(" "));
    for (matno, mat) in p.matrices.iter().enumerate() {
        for e in mat {
            if e.value == 0.0 {
                continue;
            }
            let _ = writeln!(out, "{} {} {} {} {}", matno, e.block + 1, e.i + 1, e.j + 1, fmt_value(e.value));
        }
    }
    out
}

fn tokens(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim_start();
        if t.starts_with('"') || t.starts_with('*') {
            continue;
        }
        let cleaned: String = line.chars().map(|ch| if ",{}()".contains(ch) { ' ' } else { ch }).collect();
        for tok in cleaned.split_whitespace() {
            out.push((lineno + 1, tok.to_string()));
        }
    }
    out
}

struct Cursor {
    toks: Vec<(usize, String)>,
    pos: usize,
}

impl Cursor {
    fn next(&mut self, what: &str) -> Result<(usize, String)> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::parse(format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn int(&mut self, what: &str) -> Result<i64> {
        let (line, t) = self.next(what)?;
        t.parse().map_err(|_| Error::parse(format!("line {line}: expected integer {what}, got {t:?}")))
    }

    fn float(&mut self, what: &str) -> Result<f64> {
        let (line, t) = self.next(what)?;
        let v: f64 = t.parse().map_err(|_| Error::parse(format!("line {line}: expected number {what}, got {t:?}")))?;
        if !v.is_finite() {
            return Err(Error::parse(format!("line {line}: non-finite {what}")));
        }
        Ok(v)
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// Parses an SDPA sparse file. The result is a plain minimization
/// (`maximize = false`, `offset = 0`): those reporting flags are not part
/// of the format.
pub fn parse_sdpa(text: &str) -> Result<SdpProblem<f64>> {
    let mut cur = Cursor { toks: tokens(text), pos: 0 };
    let m = cur.int("constraint count")?;
    let nb = cur.int("block count")?;
    if m < 0 || nb <= 0 {
        return Err(Error::parse("constraint count must be >= 0 and block count > 0"));
    }
    let mut blocks = Vec::new();
    for _ in 0..nb {
        let s = cur.int("block size")?;
        if s == 0 {
            return Err(Error::parse("zero block size"));
        }
        blocks.push(BlockSpec {
            size: s.unsigned_abs() as usize,
            kind: if s < 0 { BlockKind::Diagonal } else { BlockKind::Psd },
        });
    }
    let mut p = SdpProblem::new(blocks, false, 0.0);
    for _ in 0..m {
        let v = cur.float("cost")?;
        p.c.push(v);
        p.matrices.push(Vec::new());
    }
    while !cur.done() {
        let line = cur.toks[cur.pos].0;
        let matno = cur.int("matrix number")?;
        let blk = cur.int("block number")?;
        let i = cur.int("row")?;
        let j = cur.int("column")?;
        let v = cur.float("value")?;
        if matno < 0 || matno > m {
            return Err(Error::parse(format!("line {line}: matrix number {matno} out of range")));
        }
        if blk < 1 || blk > nb {
            return Err(Error::parse(format!("line {line}: block number {blk} out of range")));
        }
        let size = p.blocks[(blk - 1) as usize].size as i64;
        if i < 1 || j < 1 || i > size || j > size {
            return Err(Error::parse(format!("line {line}: index ({i}, {j}) outside block {blk}")));
        }
        let (i, j) = ((i.min(j) - 1) as usize, (i.max(j) - 1) as usize);
        p.matrices[matno as usize].push(SdpEntry { block: (blk - 1) as usize, i, j, value: v });
    }
    p.validate().map_err(|e| Error::parse(e.to_string()))?;
    Ok(p)
}

/// CSDP-style solution: line 1 is `y`; then `1 blk i j v` lines for `Z`
/// and `2 blk i j v` lines for `X` (upper triangle).
pub fn write_solution(y: &[f64], z: &BlockMatrix, x: &BlockMatrix) -> String {
    let mut out = String::new();
    let ys: Vec<String> = y.iter().map(|&v| fmt_value(v)).collect();
    let _ = writeln!(out, "{}", ys.join(" "));
    for (matno, mat) in [(1, z), (2, x)] {
        for (b, block) in mat.iter().enumerate() {
            match block {
                BlockValue::Dense(m) => {
                    for i in 0..m.nrows() {
                        for j in i..m.ncols() {
                            if m[(i, j)] != 0.0 {
                                let _ = writeln!(out, "{matno} {} {} {} {}", b + 1, i + 1, j + 1, fmt_value(m[(i, j)]));
                            }
                        }
                    }
                }
                BlockValue::Diag(d) => {
                    for (i, v) in d.iter().enumerate() {
                        if *v != 0.0 {
                            let _ = writeln!(out, "{matno} {} {} {} {}", b + 1, i + 1, i + 1, fmt_value(*v));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Reads a solution file for `p`: returns `(y, Z, X)`.
pub fn parse_solution(p: &SdpProblem<f64>, text: &str) -> Result<(Vec<f64>, BlockMatrix, BlockMatrix)> {
    let mut cur = Cursor { toks: tokens(text), pos: 0 };
    let mut y = Vec::with_capacity(p.c.len());
    for _ in 0..p.c.len() {
        y.push(cur.float("dual value")?);
    }
    let mut z: BlockMatrix = p.blocks.iter().map(BlockValue::zeros).collect();
    let mut x: BlockMatrix = p.blocks.iter().map(BlockValue::zeros).collect();
    while !cur.done() {
        let line = cur.toks[cur.pos].0;
        let matno = cur.int("matrix number")?;
        let blk = cur.int("block number")?;
        let i = cur.int("row")?;
        let j = cur.int("column")?;
        let v = cur.float("value")?;
        let target = match matno {
            1 => &mut z,
            2 => &mut x,
            _ => return Err(Error::parse(format!("line {line}: solution matrix must be 1 or 2"))),
        };
        if blk < 1 || blk as usize > p.blocks.len() {
            return Err(Error::parse(format!("line {line}: block {blk} out of range")));
        }
        let size = p.blocks[(blk - 1) as usize].size as i64;
        if i < 1 || j < 1 || i > size || j > size {
            return Err(Error::parse(format!("line {line}: index ({i}, {j}) outside block {blk}")));
        }
        let (i, j) = ((i - 1) as usize, (j - 1) as usize);
        match &mut target[(blk - 1) as usize] {
            BlockValue::Dense(m) => {
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
            BlockValue::Diag(d) => {
                if i != j {
                    return Err(Error::parse(format!("line {line}: off-diagonal entry in diagonal block")));
                }
                d[i] = v;
            }
        }
    }
    Ok((y, z, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn toy() -> SdpProblem<f64> {
        let mut p = SdpProblem::new(vec![BlockSpec { size: 1, kind: BlockKind::Psd }], false, 0.0);
        p.constant_mut().push(SdpEntry { block: 0, i: 0, j: 0, value: 1.0 });
        p.push_matrix(2.0, vec![SdpEntry { block: 0, i: 0, j: 0, value: 1.0 }]);
        p
    }

    #[test]
    fn toy_layout_is_stable() {
        let text = write_sdpa(&toy());
        assert_eq!(text, "1\n1\n1\n2\n0 1 1 1 1\n1 1 1 1 1\n");
        assert_eq!(text.lines().count(), 6);
        assert_eq!(write_sdpa(&toy()), text);
    }

    #[test]
    fn round_trip_with_diagonal_block() {
        let mut p = SdpProblem::new(
            vec![BlockSpec { size: 2, kind: BlockKind::Psd }, BlockSpec { size: 3, kind: BlockKind::Diagonal }],
            false,
            0.0,
        );
        p.push_matrix(
            -0.1,
            vec![
                SdpEntry { block: 0, i: 0, j: 1, value: 1.0 / 3.0 },
                SdpEntry { block: 1, i: 2, j: 2, value: 1e-17 },
            ],
        );
        let text = write_sdpa(&p);
        assert!(text.lines().nth(2).unwrap() == "2 -3");
        assert_eq!(parse_sdpa(&text).unwrap(), p);
    }

    #[test]
    fn parser_tolerates_punctuation_and_comments() {
        let text = "\"a comment\n* another\n1 =mdim\n1\n{2}\n(3.0)\n0 1 1 2 1.5\n1,1,1,1,1\n";
        let p = parse_sdpa(text.replace("=mdim", "").as_str()).unwrap();
        assert_eq!(p.c, vec![3.0]);
        assert_eq!(p.matrices[0][0], SdpEntry { block: 0, i: 0, j: 1, value: 1.5 });
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(parse_sdpa("1\n1\n2\n1.0\n0 2 1 1 1\n").is_err());
        assert!(parse_sdpa("1\n1\n2\n").is_err());
        assert!(parse_sdpa("1\n1\n-2\n1\n1 1 1 2 1\n").is_err());
    }

    #[test]
    fn solution_round_trip() {
        let p = toy();
        let x = vec![BlockValue::Dense(DMatrix::from_element(1, 1, 2.0))];
        let z = vec![BlockValue::Dense(DMatrix::from_element(1, 1, 0.0))];
        let text = write_solution(&[1.0], &z, &x);
        let (y2, z2, x2) = parse_solution(&p, &text).unwrap();
        assert_eq!(y2, vec![1.0]);
        assert_eq!(x2, x);
        assert_eq!(z2, z);
    }
}
