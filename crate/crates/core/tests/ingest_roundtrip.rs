use coref_core::ingest::{parse_stream, write_fixture, FixtureReader, RecordKind};
use coref_core::synth::write_xml;
use coref_core::PaperRecord;
use proptest::prelude::*;

fn word() -> impl Strategy<Value = String> {
    "[A-Z][a-zà-ÿ]{1,7}"
}

fn record(i: usize) -> impl Strategy<Value = PaperRecord> {
    let author = (word(), word(), prop::option::of(1u32..9999)).prop_map(|(f, l, s)| match s {
        Some(s) => format!("{f} {l} {s:04}"),
        None => format!("{f} {l}"),
    });
    let kind = prop::sample::select(vec![
        RecordKind::Article,
        RecordKind::Inproceedings,
        RecordKind::Incollection,
        RecordKind::Book,
        RecordKind::PhdThesis,
        RecordKind::MastersThesis,
    ]);
    (
        prop::collection::vec(author, 1..5),
        prop::collection::vec(word(), 1..6),
        prop::option::of(1950i32..2030),
        kind,
    )
        .prop_map(move |(authors, title, year, kind)| {
            let mut r = PaperRecord::new(format!("conf/x/{i}"), year, title.join(" "))
                .with_authors(authors);
            r.kind = kind;
            r
        })
}

fn records() -> impl Strategy<Value = Vec<PaperRecord>> {
    (0usize..8).prop_flat_map(|n| (0..n).map(record).collect::<Vec<_>>())
}

proptest! {
    #[test]
    fn xml_to_fixture_round_trip(recs in records()) {
        let mut xml = Vec::new();
        write_xml(&mut xml, &recs).unwrap();
        let parsed: Vec<PaperRecord> = parse_stream(xml.as_slice()).collect::<Result<_, _>>().unwrap();
        prop_assert_eq!(&parsed, &recs);

        let mut tsv = Vec::new();
        write_fixture(&mut tsv, &parsed).unwrap();
        let loaded: Vec<PaperRecord> = FixtureReader::new(tsv.as_slice()).collect::<Result<_, _>>().unwrap();
        // the fixture format has no record kind column
        let as_articles: Vec<PaperRecord> = parsed
            .into_iter()
            .map(|mut r| {
                r.kind = RecordKind::Article;
                r
            })
            .collect();
        prop_assert_eq!(loaded, as_articles);
    }
}

#[test]
fn named_entities_survive_the_round_trip() {
    let xml = r#"<?xml version="1.0"?>
<dblp>
<article key="journals/x/1"><author>J&uuml;rgen M&uuml;ller 0002</author><author>Ren&eacute;e Tr&#228;ger</author><title>&Aring;ngstr&ouml;m</title><year>2001</year></article>
</dblp>"#;
    let parsed: Vec<PaperRecord> = parse_stream(xml.as_bytes())
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(parsed[0].authors, ["Jürgen Müller 0002", "Renée Träger"]);
    assert_eq!(parsed[0].title, "Ångström");
    let mut tsv = Vec::new();
    write_fixture(&mut tsv, &parsed).unwrap();
    let loaded: Vec<PaperRecord> = FixtureReader::new(tsv.as_slice())
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(loaded, parsed);
}
