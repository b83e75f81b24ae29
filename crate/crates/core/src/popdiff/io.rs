//! Raw bit dumps and run-length text for grid sets.
//!
//! Bit dump: 16-byte header (`MAGIC`, `d` as u32, `N` as u32, popcount as
//! u32, little endian) followed by the cells in flat order, eight per byte,
//! least significant bit first.
//!
//! Run-length text: a `gridset d=<d> n=<N>` line, then whitespace-separated
//! run lengths alternating between absent and present cells, starting with
//! absent.

use std::io::{Read, Write};

use super::{check_shape, GridSet, PopDiffError};

pub const MAGIC: [u8; 4] = *b"PDGS";
pub const HEADER_LEN: usize = 16;

pub fn write_bits<W: Write>(set: &GridSet, mut w: W) -> Result<(), PopDiffError> {
    let mut header = [0u8; HEADER_LEN];
    header[..4].copy_from_slice(&MAGIC);
    header[4..8].copy_from_slice(&(set.dim() as u32).to_le_bytes());
    header[8..12].copy_from_slice(&(set.side() as u32).to_le_bytes());
    header[12..16].copy_from_slice(&(set.popcount() as u32).to_le_bytes());
    w.write_all(&header)?;
    let mut body = vec![0u8; set.cells().div_ceil(8)];
    for c in set.iter_flat() {
        body[c / 8] |= 1 << (c % 8);
    }
    w.write_all(&body)?;
    Ok(())
}

pub fn read_bits<R: Read>(mut r: R) -> Result<GridSet, PopDiffError> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)?;
    if header[..4] != MAGIC {
        return Err(PopDiffError::Format("bad magic".into()));
    }
    let word = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().expect("4 bytes")) as usize;
    let (d, side, pop) = (word(4), word(8), word(12));
    let cells = check_shape(d, side)?;
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() != cells.div_ceil(8) {
        return Err(PopDiffError::Format(format!(
            "expected {} body bytes, found {}",
            cells.div_ceil(8),
            body.len()
        )));
    }
    let set = GridSet::from_flat(d, side, (0..cells).filter(|&c| body[c / 8] >> (c % 8) & 1 == 1))?;
    if set.popcount() as usize != pop {
        return Err(PopDiffError::Format(format!(
            "header popcount {pop}, body has {}",
            set.popcount()
        )));
    }
    Ok(set)
}

pub fn write_rle<W: Write>(set: &GridSet, mut w: W) -> Result<(), PopDiffError> {
    writeln!(w, "gridset d={} n={}", set.dim(), set.side())?;
    let mut runs = Vec::new();
    let (mut state, mut len) = (false, 0usize);
    for c in 0..set.cells() {
        if set.contains_flat(c) == state {
            len += 1;
        } else {
            runs.push(len);
            state = !state;
            len = 1;
        }
    }
    runs.push(len);
    for chunk in runs.chunks(16) {
        let line: Vec<String> = chunk.iter().map(usize::to_string).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

fn header_value(token: Option<&str>, key: &str) -> Result<usize, PopDiffError> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| PopDiffError::Format(format!("expected {key}=<integer> in header")))
}

pub fn read_rle<R: Read>(mut r: R) -> Result<GridSet, PopDiffError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| PopDiffError::Format("empty file".into()))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("gridset") {
        return Err(PopDiffError::Format("missing gridset header".into()));
    }
    let d = header_value(tokens.next(), "d")?;
    let side = header_value(tokens.next(), "n")?;
    let cells = check_shape(d, side)?;
    let mut present = Vec::new();
    let (mut pos, mut state) = (0usize, false);
    for tok in lines.flat_map(str::split_whitespace) {
        let len: usize = tok
            .parse()
            .map_err(|_| PopDiffError::Format(format!("bad run length {tok:?}")))?;
        if pos + len > cells {
            return Err(PopDiffError::Format("runs exceed grid size".into()));
        }
        if state {
            present.extend(pos..pos + len);
        }
        pos += len;
        state = !state;
    }
    if pos != cells {
        return Err(PopDiffError::Format(format!("runs cover {pos} of {cells} cells")));
    }
    GridSet::from_flat(d, side, present)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::popdiff::random;

    #[test]
    fn round_trips() {
        for (d, side) in [(1, 1), (1, 70), (2, 13), (3, 5)] {
            let g = random(d, side, 0.4, 11).unwrap();
            let mut buf = Vec::new();
            write_bits(&g, &mut buf).unwrap();
            assert_eq!(buf.len(), HEADER_LEN + g.cells().div_ceil(8));
            assert_eq!(read_bits(buf.as_slice()).unwrap(), g);
            let mut txt = Vec::new();
            write_rle(&g, &mut txt).unwrap();
            assert_eq!(read_rle(txt.as_slice()).unwrap(), g);
        }
    }

    #[test]
    fn rejects_corruption() {
        let g = random(1, 40, 0.5, 1).unwrap();
        let mut buf = Vec::new();
        write_bits(&g, &mut buf).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(read_bits(bad.as_slice()).is_err());
        let mut bad = buf.clone();
        bad[12] ^= 1;
        assert!(read_bits(bad.as_slice()).is_err());
        assert!(read_bits(&buf[..buf.len() - 1]).is_err());
        assert!(read_rle("gridset d=1 n=4\n1 2".as_bytes()).is_err());
        assert!(read_rle("gridset d=1 n=4\n1 2 3".as_bytes()).is_err());
        let g = read_rle("gridset d=1 n=4\n1 2 1".as_bytes()).unwrap();
        assert_eq!(g.iter_flat().collect::<Vec<_>>(), vec![1, 2]);
    }
}
