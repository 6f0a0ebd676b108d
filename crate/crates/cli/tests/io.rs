use duelbias::error::Error;
use duelbias::input::{
    infer_catalog, parse_duels, parse_items, parse_tags, write_duels, write_items, write_tags, Input, ItemCatalog,
};
use duelbias::mapping::ColumnMapping;
use duelbias_core::bias::Side;

const ITEMS: &str = "item_id,group,category,external_ref\nm1,A,pizza,http://x/1\nt1,B,pizza,\n";

fn input(name: &str, text: &str) -> Input {
    Input::from_bytes(name, text.as_bytes().to_vec())
}

fn catalog(text: &str) -> ItemCatalog {
    parse_items(&input("items.csv", text), &ColumnMapping::default()).unwrap()
}

fn duels_csv(rows: &[&str]) -> String {
    let mut s = String::from("duel_id,category,dimension,item_a,item_b,winner,rater_id\n");
    for r in rows {
        s.push_str(r);
        s.push('\n');
    }
    s
}

fn parse_duel_rows(rows: &[&str]) -> duelbias::Result<Vec<duelbias_core::bias::DuelRecord>> {
    parse_duels(&input("duels.csv", &duels_csv(rows)), &catalog(ITEMS), &[], &ColumnMapping::default())
}

#[test]
fn header_and_two_rows_give_two_items() {
    let c = catalog(ITEMS);
    assert_eq!(c.len(), 2);
    assert_eq!(c.get("m1").unwrap().group, Side::A);
    assert_eq!(c.get("m1").unwrap().external_ref.as_deref(), Some("http://x/1"));
    assert_eq!(c.get("t1").unwrap().external_ref, None);
}

#[test]
fn external_ref_column_is_optional() {
    let c = catalog("item_id,group,category\nm1,A,pizza\n");
    assert_eq!(c.len(), 1);
}

#[test]
fn duplicate_item_id_names_the_id() {
    let err = parse_items(&input("items.csv", "item_id,group,category\nm1,A,pizza\nm1,B,pizza\n"), &ColumnMapping::default())
        .unwrap_err();
    assert!(matches!(&err, Error::Validation(m) if m.contains("`m1`") && m.contains(":3")), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn unknown_group_is_rejected() {
    let err = parse_items(&input("items.csv", "item_id,group,category\nm1,C,pizza\n"), &ColumnMapping::default())
        .unwrap_err();
    assert!(matches!(&err, Error::Validation(m) if m.contains("`C`")), "{err}");
}

#[test]
fn missing_column_and_malformed_rows_report_lines() {
    let err = parse_items(&input("items.csv", "item_id,category\nm1,pizza\n"), &ColumnMapping::default()).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    let err = parse_items(&input("items.csv", "item_id,group,category\nm1,A,pizza\n,B,pizza\n"), &ColumnMapping::default())
        .unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
}

#[test]
fn five_hundred_rows_give_five_hundred_records() {
    let rows: Vec<String> = (0..500).map(|i| format!("d{i},pizza,tasty,m1,t1,{},r{}", if i % 3 == 0 { "A" } else { "B" }, i % 7)).collect();
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    let duels = parse_duel_rows(&refs).unwrap();
    assert_eq!(duels.len(), 500);
    assert_eq!(duels.iter().filter(|d| d.winner == Side::B).count(), 333);
}

#[test]
fn same_group_duel_is_a_validation_error() {
    let items = "item_id,group,category\nm1,A,pizza\nm2,A,pizza\n";
    let err = parse_duels(
        &input("duels.csv", &duels_csv(&["d1,pizza,tasty,m1,m2,A,r1"])),
        &catalog(items),
        &[],
        &ColumnMapping::default(),
    )
    .unwrap_err();
    assert!(matches!(&err, Error::Validation(m) if m.contains("two group-A items")), "{err}");
}

#[test]
fn bad_winner_is_a_parse_error() {
    let err = parse_duel_rows(&["d1,pizza,tasty,m1,t1,X,r1"]).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
}

#[test]
fn unknown_references_are_referential_errors() {
    let err = parse_duel_rows(&["d1,pizza,tasty,m1,zz,A,r1"]).unwrap_err();
    assert!(matches!(&err, Error::Referential(m) if m.contains("`zz`")), "{err}");
    let err = parse_duel_rows(&["d1,sushi,tasty,m1,t1,A,r1"]).unwrap_err();
    assert!(matches!(&err, Error::Referential(m) if m.contains("`sushi`")), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn duels_are_oriented_with_group_a_first() {
    let duels = parse_duel_rows(&["d1,pizza,tasty,t1,m1,A,r1", "d2,pizza,tasty,t1,m1,m1,r1"]).unwrap();
    for d in &duels {
        assert_eq!((d.item_a.as_str(), d.item_b.as_str()), ("m1", "t1"));
    }
    // "A" named the first listed item, t1, which is in group B
    assert_eq!(duels[0].winner, Side::B);
    assert_eq!(duels[1].winner, Side::A);
}

#[test]
fn dimension_vocabulary_is_enforced_when_given() {
    let text = duels_csv(&["d1,pizza,spicy,m1,t1,A,r1"]);
    let dims = vec!["tasty".to_string()];
    let err = parse_duels(&input("duels.csv", &text), &catalog(ITEMS), &dims, &ColumnMapping::default()).unwrap_err();
    assert!(matches!(&err, Error::Validation(m) if m.contains("spicy")));
}

#[test]
fn column_mapping_adapts_headers_and_labels() {
    let mapping = ColumnMapping::parse(
        "[items]\nitem_id = \"image\"\ngroup = \"source\"\n[duels]\nitem_a = \"left\"\nitem_b = \"right\"\n[labels]\nrecipe = \"A\"\ninstagram = \"B\"\n",
    )
    .unwrap();
    let items = parse_items(&input("i.csv", "image,source,category\nm1,recipe,pizza\nt1,instagram,pizza\n"), &mapping).unwrap();
    assert_eq!(items.get("t1").unwrap().group, Side::B);
    let duels = parse_duels(
        &input("d.csv", "duel_id,category,dimension,left,right,winner,rater_id\nd1,pizza,tasty,m1,t1,instagram,r\n"),
        &items,
        &[],
        &mapping,
    )
    .unwrap();
    assert_eq!(duels[0].winner, Side::B);
    assert!(ColumnMapping::parse("[items]\nnot_a_column = \"x\"\n").is_err());
}

#[test]
fn round_trips_are_semantic_identities() {
    let c = catalog(ITEMS);
    let mut buf = Vec::new();
    write_items(&mut buf, &c).unwrap();
    assert_eq!(parse_items(&Input::from_bytes("x", buf), &ColumnMapping::default()).unwrap(), c);

    let duels = parse_duel_rows(&["d1,pizza,tasty,m1,t1,B,r1", "d2,pizza,home,t1,m1,A,\"r,2\""]).unwrap();
    let mut buf = Vec::new();
    write_duels(&mut buf, &duels).unwrap();
    let again = parse_duels(&Input::from_bytes("x", buf), &c, &[], &ColumnMapping::default()).unwrap();
    assert_eq!(again, duels);

    let text = "duel_id,item_id,rater_id,raw_tag\nd1,m1,r1,\"Looks delicious, cheesy\"\nd1,t1,r1,greasy\n";
    let tags = parse_tags(&input("t.csv", text), &c, &ColumnMapping::default()).unwrap();
    let mut buf = Vec::new();
    write_tags(&mut buf, &tags).unwrap();
    assert_eq!(parse_tags(&Input::from_bytes("x", buf), &c, &ColumnMapping::default()).unwrap(), tags);
}

#[test]
fn tags_on_unknown_items_are_referential_errors() {
    let err = parse_tags(&input("t.csv", "duel_id,item_id,rater_id,raw_tag\nd1,zz,r,x\n"), &catalog(ITEMS), &ColumnMapping::default())
        .unwrap_err();
    assert!(matches!(err, Error::Referential(_)));
}

#[test]
fn catalog_can_be_inferred_from_duels() {
    let text = duels_csv(&["d1,pizza,tasty,m1,t1,B,r1", "d2,pizza,tasty,m1,t2,A,r1"]);
    let c = infer_catalog(&input("d.csv", &text), &ColumnMapping::default()).unwrap();
    assert_eq!(c.members("pizza", Side::B), ["t1", "t2"]);
    let clash = duels_csv(&["d1,pizza,tasty,m1,t1,B,r1", "d2,pizza,tasty,t1,m1,A,r1"]);
    assert!(infer_catalog(&input("d.csv", &clash), &ColumnMapping::default()).is_err());
}

#[test]
fn digests_are_sha256_of_the_bytes() {
    let i = Input::from_bytes("x", b"abc".to_vec());
    assert_eq!(i.sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
