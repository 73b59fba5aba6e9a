//! Binary graph snapshot.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic        b"CRG1"
//! version      u16            (= 1)
//! author_count u64
//! paper_count  u64
//! edge_count   u64
//! paper_offsets  (paper_count + 1) × u64
//! paper_authors  edge_count × u32
//! author_offsets (author_count + 1) × u64
//! author_papers  edge_count × u32
//! authors      author_count × { canonical: str, suffix: str }   (empty suffix = none)
//! papers       paper_count × { dblp_key: str, title: str, has_year: u8, year: i32 }
//! ```
//!
//! where `str` is a `u32` byte length followed by UTF-8 bytes.

use std::io::{Read, Write};

use super::{AuthorId, AuthorNode, BipartiteGraph, GraphError, PaperId, PaperNode};

pub const MAGIC: &[u8; 4] = b"CRG1";
pub const VERSION: u16 = 1;

pub fn write_snapshot<W: Write>(g: &BipartiteGraph, mut out: W) -> Result<(), GraphError> {
    let (paper_offsets, paper_authors, author_offsets, author_papers) = g.raw_parts();
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    for n in [g.author_count(), g.paper_count(), g.edge_count()] {
        out.write_all(&(n as u64).to_le_bytes())?;
    }
    write_u64s(&mut out, paper_offsets)?;
    write_u32s(&mut out, paper_authors.iter().map(|a| a.0))?;
    write_u64s(&mut out, author_offsets)?;
    write_u32s(&mut out, author_papers.iter().map(|p| p.0))?;
    for a in g.authors() {
        write_str(&mut out, &a.canonical_name)?;
        write_str(&mut out, a.homonym_suffix.as_deref().unwrap_or(""))?;
    }
    for p in g.papers() {
        write_str(&mut out, &p.dblp_key)?;
        write_str(&mut out, &p.title)?;
        out.write_all(&[u8::from(p.year.is_some())])?;
        out.write_all(&p.year.unwrap_or(0).to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn snapshot_bytes(g: &BipartiteGraph) -> Vec<u8> {
    let mut out = Vec::new();
    write_snapshot(g, &mut out).expect("writing to a Vec cannot fail");
    out
}

pub fn read_snapshot<R: Read>(mut input: R) -> Result<BipartiteGraph, GraphError> {
    let bad = |m: &str| GraphError::Snapshot(m.to_owned());
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("bad magic"));
    }
    let mut v = [0u8; 2];
    input.read_exact(&mut v)?;
    if u16::from_le_bytes(v) != VERSION {
        return Err(bad("unsupported version"));
    }
    let author_count = read_len(&mut input)?;
    let paper_count = read_len(&mut input)?;
    let edge_count = read_len(&mut input)?;
    if author_count > u32::MAX as usize || paper_count > u32::MAX as usize {
        return Err(GraphError::Overflow);
    }

    let paper_offsets = read_u64s(&mut input, paper_count + 1)?;
    let paper_authors: Vec<AuthorId> = read_u32s(&mut input, edge_count)?
        .into_iter()
        .map(AuthorId)
        .collect();
    let author_offsets = read_u64s(&mut input, author_count + 1)?;
    let author_papers: Vec<PaperId> = read_u32s(&mut input, edge_count)?
        .into_iter()
        .map(PaperId)
        .collect();

    check_offsets(&paper_offsets, edge_count).ok_or_else(|| bad("paper offsets"))?;
    check_offsets(&author_offsets, edge_count).ok_or_else(|| bad("author offsets"))?;
    for p in 0..paper_count {
        let row = &paper_authors[paper_offsets[p] as usize..paper_offsets[p + 1] as usize];
        if row.windows(2).any(|w| w[0] >= w[1]) || row.iter().any(|a| a.index() >= author_count) {
            return Err(bad("paper row not strictly ascending or out of range"));
        }
    }

    let mut authors = Vec::with_capacity(author_count);
    for i in 0..author_count {
        let canonical_name = read_str(&mut input)?;
        let suffix = read_str(&mut input)?;
        if canonical_name.is_empty() {
            return Err(bad("empty author name"));
        }
        authors.push(AuthorNode {
            id: AuthorId(i as u32),
            canonical_name,
            homonym_suffix: (!suffix.is_empty()).then_some(suffix),
        });
    }
    let mut papers = Vec::with_capacity(paper_count);
    for i in 0..paper_count {
        let dblp_key = read_str(&mut input)?;
        let title = read_str(&mut input)?;
        let mut flag = [0u8; 1];
        input.read_exact(&mut flag)?;
        let mut year = [0u8; 4];
        input.read_exact(&mut year)?;
        papers.push(PaperNode {
            id: PaperId(i as u32),
            dblp_key,
            title,
            year: (flag[0] != 0).then_some(i32::from_le_bytes(year)),
        });
    }
    let mut trailing = [0u8; 1];
    if input.read(&mut trailing)? != 0 {
        return Err(bad("trailing bytes"));
    }

    let g = BipartiteGraph::from_parts(authors, papers, paper_offsets, paper_authors)?;
    // the stored reverse direction must agree with the rebuilt one
    let (_, _, ao, ap) = g.raw_parts();
    if ao != author_offsets.as_slice() || ap != author_papers.as_slice() {
        return Err(bad("author rows disagree with paper rows"));
    }
    Ok(g)
}

fn check_offsets(offsets: &[u64], edges: usize) -> Option<()> {
    (offsets.first() == Some(&0)
        && offsets.last() == Some(&(edges as u64))
        && offsets.windows(2).all(|w| w[0] <= w[1]))
    .then_some(())
}

fn write_u64s<W: Write>(out: &mut W, values: &[u64]) -> std::io::Result<()> {
    for v in values {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn write_u32s<W: Write>(out: &mut W, values: impl Iterator<Item = u32>) -> std::io::Result<()> {
    for v in values {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn write_str<W: Write>(out: &mut W, s: &str) -> Result<(), GraphError> {
    let len = u32::try_from(s.len()).map_err(|_| GraphError::Overflow)?;
    out.write_all(&len.to_le_bytes())?;
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn read_len<R: Read>(input: &mut R) -> Result<usize, GraphError> {
    let mut b = [0u8; 8];
    input.read_exact(&mut b)?;
    usize::try_from(u64::from_le_bytes(b)).map_err(|_| GraphError::Overflow)
}

fn read_u64s<R: Read>(input: &mut R, n: usize) -> Result<Vec<u64>, GraphError> {
    let mut out = Vec::with_capacity(n.min(1 << 24));
    let mut b = [0u8; 8];
    for _ in 0..n {
        input.read_exact(&mut b)?;
        out.push(u64::from_le_bytes(b));
    }
    Ok(out)
}

fn read_u32s<R: Read>(input: &mut R, n: usize) -> Result<Vec<u32>, GraphError> {
    let mut out = Vec::with_capacity(n.min(1 << 24));
    let mut b = [0u8; 4];
    for _ in 0..n {
        input.read_exact(&mut b)?;
        out.push(u32::from_le_bytes(b));
    }
    Ok(out)
}

fn read_str<R: Read>(input: &mut R) -> Result<String, GraphError> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    let len = u32::from_le_bytes(b) as usize;
    let mut bytes = Vec::with_capacity(len.min(1 << 20));
    input.take(len as u64).read_to_end(&mut bytes)?;
    if bytes.len() != len {
        return Err(GraphError::Snapshot("truncated string".into()));
    }
    String::from_utf8(bytes).map_err(|_| GraphError::Snapshot("invalid UTF-8".into()))
}
