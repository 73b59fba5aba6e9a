//! Seeded synthetic homonym benchmark with planted ground truth.
//!
//! Several identities share one canonical name and are told apart by their
//! DBLP-style suffix. Each identity writes papers with co-authors drawn
//! mostly from its own pool, occasionally from another identity's pool,
//! and otherwise from one-off authors who never reappear.

use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::PaperRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub seed: u64,
    pub name: String,
    pub identities: usize,
    pub papers_min: usize,
    pub papers_max: usize,
    pub pool_size: usize,
    pub coauthors_min: usize,
    pub coauthors_max: usize,
    /// Probability a co-author slot is filled from the identity's own pool.
    pub reuse: f64,
    /// Probability a co-author slot is filled from another identity's pool.
    pub cross_overlap: f64,
    /// Extra papers by the unsuffixed name (no ground truth).
    pub unsuffixed_papers: usize,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed_2019,
            name: "Chen Li".to_owned(),
            identities: 10,
            papers_min: 8,
            papers_max: 15,
            pool_size: 20,
            coauthors_min: 3,
            coauthors_max: 5,
            reuse: 0.70,
            cross_overlap: 0.02,
            unsuffixed_papers: 0,
        }
    }
}

fn pool_member(identity: usize, j: usize) -> String {
    format!("Pool{identity:02} Member{j:02}")
}

/// Number of cross-identity slots allowed for `slots` co-author slots and
/// `distinct` distinct co-authors: at most `rate` of either, counting that
/// each foreign slot replaces a one-off author.
fn cross_budget(rate: f64, slots: usize, distinct: usize) -> usize {
    let by_slots = (rate * slots as f64 + 1e-9).floor() as usize;
    let by_people = (rate * distinct as f64 / (1.0 + rate) + 1e-9).floor() as usize;
    by_slots.min(by_people)
}

/// Generates the benchmark records, sorted by key.
///
/// Co-author slots of an identity's papers are filled from its own pool
/// with probability `reuse`, otherwise by one-off authors. A budget of
/// one-off slots (`cross_overlap` of all slots and of all distinct
/// co-authors, whichever is smaller) is then reassigned to members of
/// other identities' pools.
pub fn generate(cfg: &BenchmarkConfig) -> Vec<PaperRecord> {
    assert!(cfg.identities >= 1 && cfg.identities <= 9999);
    assert!(cfg.papers_min >= 1 && cfg.papers_min <= cfg.papers_max);
    assert!(cfg.coauthors_min <= cfg.coauthors_max && cfg.pool_size >= 1);
    assert!((0.0..=1.0).contains(&cfg.reuse) && (0.0..=1.0).contains(&cfg.cross_overlap));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut guests = 0usize;
    let mut guest = || {
        guests += 1;
        format!("Guest Author{guests:05}")
    };

    // (identity, co-authors) per paper
    let mut papers: Vec<(usize, Vec<String>)> = Vec::new();
    for identity in 0..cfg.identities {
        for _ in 0..rng.gen_range(cfg.papers_min..=cfg.papers_max) {
            let count = rng.gen_range(cfg.coauthors_min..=cfg.coauthors_max);
            let mut names: Vec<String> = Vec::with_capacity(count);
            while names.len() < count {
                let name = if rng.gen_bool(cfg.reuse) {
                    pool_member(identity, rng.gen_range(0..cfg.pool_size))
                } else {
                    guest()
                };
                if !names.contains(&name) {
                    names.push(name);
                }
            }
            papers.push((identity, names));
        }
    }

    if cfg.identities > 1 {
        let slots: usize = papers.iter().map(|(_, n)| n.len()).sum();
        let distinct = papers
            .iter()
            .flat_map(|(_, n)| n.iter())
            .collect::<std::collections::HashSet<_>>()
            .len();
        let mut guest_slots: Vec<(usize, usize)> = papers
            .iter()
            .enumerate()
            .flat_map(|(p, (_, names))| {
                names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| n.starts_with("Guest"))
                    .map(move |(k, _)| (p, k))
            })
            .collect();
        let budget = cross_budget(cfg.cross_overlap, slots, distinct).min(guest_slots.len());
        guest_slots.shuffle(&mut rng);
        for &(p, k) in &guest_slots[..budget] {
            let owner = papers[p].0;
            loop {
                let mut other = rng.gen_range(0..cfg.identities - 1);
                if other >= owner {
                    other += 1;
                }
                let name = pool_member(other, rng.gen_range(0..cfg.pool_size));
                if !papers[p].1.contains(&name) {
                    papers[p].1[k] = name;
                    break;
                }
            }
        }
    }

    let mut records = Vec::new();
    let mut written = vec![0usize; cfg.identities];
    for (identity, mut authors) in papers {
        let suffix = identity + 1;
        let k = written[identity];
        written[identity] += 1;
        let slot = rng.gen_range(0..=authors.len());
        authors.insert(slot, format!("{} {suffix:04}", cfg.name));
        records.push(
            PaperRecord::new(
                format!("synth/id{suffix:04}/{k:03}"),
                Some(2000 + rng.gen_range(0..20)),
                format!("Paper {k} of identity {suffix}"),
            )
            .with_authors(authors),
        );
    }
    for k in 0..cfg.unsuffixed_papers {
        let count = rng.gen_range(cfg.coauthors_min..=cfg.coauthors_max);
        let mut authors: Vec<String> = (0..count).map(|_| guest()).collect();
        authors.push(cfg.name.clone());
        authors.shuffle(&mut rng);
        records.push(
            PaperRecord::new(
                format!("synth/furball/{k:03}"),
                None,
                format!("Furball paper {k}"),
            )
            .with_authors(authors),
        );
    }
    records.sort_by(|a, b| a.dblp_key.cmp(&b.dblp_key));
    records
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

/// Writes records as a DBLP-schema XML document.
pub fn write_xml<'a, W, I>(mut out: W, records: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a PaperRecord>,
{
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(out, r#"<!DOCTYPE dblp SYSTEM "dblp.dtd">"#)?;
    writeln!(out, "<dblp>")?;
    for r in records {
        let tag = r.kind.as_str();
        writeln!(
            out,
            r#"<{tag} mdate="2019-01-01" key="{}">"#,
            escape(&r.dblp_key)
        )?;
        for a in &r.authors {
            writeln!(out, "<author>{}</author>", escape(a))?;
        }
        writeln!(out, "<title>{}</title>", escape(&r.title))?;
        if let Some(y) = r.year {
            writeln!(out, "<year>{y}</year>")?;
        }
        writeln!(out, "</{tag}>")?;
    }
    writeln!(out, "</dblp>")
}
