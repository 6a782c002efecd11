//! Seeded generators for synthetic corpora, vocabularies and graphs with
//! planted structure. The bundled fixture files are produced by the
//! functions here and kept in sync by a test.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Author, Corpus, DocumentKind, DocumentRecord, Term, TermKind, Vocabulary};
use crate::netbuild::CitationGraph;

/// Word that marks every document of the planted clinical theme.
pub const OUTBREAK_MARKER: &str = "outbreak";

const COUNTRIES: [&str; 6] = ["US", "GB", "DE", "FR", "CD", "GA"];

struct Theme {
    key: &'static str,
    titles: [&'static str; 4],
    lead: &'static str,
    sentences: [&'static str; 6],
}

const THEMES: [Theme; 3] = [
    Theme {
        key: "gp",
        titles: [
            "Structure of the Ebola virus glycoprotein",
            "Glycoprotein cleavage and viral entry",
            "Neutralizing antibodies against the glycoprotein",
            "Receptor binding by the filovirus glycoprotein",
        ],
        lead: "The Ebola virus glycoprotein was studied by structural methods.",
        sentences: [
            "Receptor binding requires cathepsin cleavage of the glycan cap.",
            "We report the crystal structure of the trimer bound to neutralizing antibodies.",
            "Membrane fusion depends on an internal fusion loop.",
            "Mutations near the base reduced entry in pseudotyped particles.",
            "Glycosylation shields conserved epitopes from antibodies in patient sera.",
            "Replication of recombinant virus confirmed the entry phenotype.",
        ],
    },
    Theme {
        key: "vp",
        titles: [
            "VP40 drives filamentous particle formation",
            "Oligomerization of the matrix protein VP40",
            "Host factors recruited during VP40 budding",
            "Lipid binding by the Marburg virus matrix protein",
        ],
        lead: "The matrix protein VP40 was examined in transfected cells.",
        sentences: [
            "Virus assembly at the plasma membrane requires phosphatidylserine.",
            "Budding of virus-like particles needs late domain motifs.",
            "Octameric rings bind RNA while dimers traffic to the membrane.",
            "Ubiquitin ligases enhance release of filamentous particles.",
            "Electron tomography resolved the helical lattice beneath the envelope.",
            "Marburgvirus and Ebolavirus proteins share the assembly pathway.",
        ],
    },
    Theme {
        key: "ob",
        titles: [
            "Clinical features of Ebola virus disease in an outbreak",
            "Hospital transmission during an Ebola outbreak",
            "Case fatality and supportive care of patients",
            "Laboratory diagnosis in a rural outbreak",
        ],
        lead: "We describe an outbreak of Ebola virus disease among patients.",
        sentences: [
            "Fever and hemorrhage were recorded on admission to hospital.",
            "Case fatality fell after fluid therapy and supportive care.",
            "Contact tracing and quarantine were organized by district teams.",
            "Health care workers acquired infection before patient isolation.",
            "RT-PCR confirmed laboratory diagnosis in a mobile unit.",
            "Convalescent plasma was given to selected patients.",
        ],
    },
];

fn theme_abstract(theme: &Theme, j: usize) -> String {
    let s = &theme.sentences;
    format!(
        "{} {} {} {}",
        theme.lead,
        s[j % 6],
        s[(j + 1) % 6],
        s[(j + 3) % 6]
    )
}

fn paper(id: String, title: String, abstract_text: String, year: i32, cites: u64, refs: Vec<String>, country: &str) -> DocumentRecord {
    DocumentRecord {
        id,
        kind: DocumentKind::Paper,
        title,
        abstract_text,
        year,
        authors: vec![Author {
            name: "Author A".into(),
            country: Some(country.into()),
        }],
        assignees: vec![],
        venue: Some("Synthetic Journal".into()),
        times_cited_global: cites,
        references: refs,
    }
}

/// Sixty papers in three themes of twenty: glycoprotein structure, VP40
/// assembly, and a clinical outbreak theme marked by [`OUTBREAK_MARKER`].
///
/// Global citation counts are distinct, so the top 20% (twelve papers) are
/// the four most-cited papers of each theme. Within a theme every paper
/// cites all earlier papers; one extra citation bridges the glycoprotein
/// and VP40 themes.
pub fn papers_60() -> Corpus {
    let mut docs = Vec::with_capacity(60);
    for (t, theme) in THEMES.iter().enumerate() {
        for j in 0..20 {
            let id = format!("{}{:02}", theme.key, j);
            let mut refs: Vec<String> = (0..j).map(|k| format!("{}{:02}", theme.key, k)).collect();
            if t == 0 && j == 3 {
                refs.push("vp03".into());
            }
            if j >= 10 {
                refs.push(format!("ext-{}-{j}", theme.key));
            }
            let title = format!("{} ({})", theme.titles[j % 4], j + 1);
            let cites = 100 - 5 * j as u64 + t as u64;
            let country = COUNTRIES[(t * 2 + j) % COUNTRIES.len()];
            docs.push(paper(id, title, theme_abstract(theme, j), 1995 + j as i32, cites, refs, country));
        }
    }
    Corpus::new(DocumentKind::Paper, docs, "synthetic:papers_60").expect("valid synthetic corpus")
}

fn term(id: &str, label: &str, synonyms: &[&str], parents: &[&str]) -> Term {
    Term {
        term_id: id.into(),
        label: label.into(),
        synonyms: synonyms.iter().map(|s| s.to_string()).collect(),
        parents: parents.iter().map(|s| s.to_string()).collect(),
        kind: TermKind::MeshLike,
    }
}

/// A forty-term MeSH-like vocabulary for [`papers_60`]. "Disease Outbreaks"
/// sits under the non-clinical "Epidemiology" root.
pub fn vocab_mesh_like() -> Vocabulary {
    let terms = vec![
        term("R01", "Viruses", &[], &[]),
        term("R02", "Proteins", &[], &[]),
        term("R03", "Phenomena and Processes", &[], &[]),
        term("R04", "Epidemiology", &[], &[]),
        term("R05", "Diseases", &[], &[]),
        term("R06", "Diagnosis", &[], &[]),
        term("R07", "Therapeutics", &[], &[]),
        term("R08", "Persons", &[], &[]),
        term("R09", "Health Care", &[], &[]),
        term("V01", "Filoviridae", &["filovirus"], &["R01"]),
        term("V02", "Ebolavirus", &["ebola virus"], &["V01"]),
        term("V03", "Marburgvirus", &["marburg virus"], &["V01"]),
        term("P01", "Viral Proteins", &[], &["R02"]),
        term("P02", "Glycoproteins", &["glycoprotein", "glycan cap"], &["P01"]),
        term("P03", "Viral Matrix Proteins", &["matrix protein", "VP40"], &["P01"]),
        term("P04", "Antibodies", &[], &["R02"]),
        term("P05", "Antibodies, Neutralizing", &["neutralizing antibodies"], &["P04"]),
        term("F01", "Virus Assembly", &["assembly"], &["R03"]),
        term("F02", "Virus Release", &["budding"], &["R03"]),
        term("F03", "Membrane Fusion", &["fusion", "fusion loop"], &["R03"]),
        term("F04", "Virus Attachment", &["receptor binding"], &["R03"]),
        term("F05", "Virus Replication", &["replication"], &["R03"]),
        term("E01", "Disease Outbreaks", &["outbreak", "outbreaks"], &["R04"]),
        term("E02", "Mortality", &["case fatality"], &["R04"]),
        term("E03", "Contact Tracing", &[], &["R04"]),
        term("E04", "Incidence", &[], &["R04"]),
        term("S01", "Hemorrhagic Fever, Ebola", &["ebola virus disease"], &["R05"]),
        term("C01", "Clinical Laboratory Techniques", &["laboratory diagnosis"], &["R06"]),
        term("C02", "Reverse Transcriptase Polymerase Chain Reaction", &["RT-PCR"], &["C01"]),
        term("C03", "Signs and Symptoms", &[], &["R06"]),
        term("C04", "Fever", &[], &["C03"]),
        term("C05", "Hemorrhage", &[], &["C03"]),
        term("T01", "Fluid Therapy", &[], &["R07"]),
        term("T02", "Immunization, Passive", &["convalescent plasma"], &["R07"]),
        term("T03", "Supportive Care", &[], &["R07"]),
        term("H01", "Patients", &["patient"], &["R08"]),
        term("H02", "Health Personnel", &["health care workers"], &["R08"]),
        term("K01", "Patient Isolation", &["isolation"], &["R09"]),
        term("K02", "Hospitals", &["hospital"], &["R09"]),
        term("K03", "Quarantine", &[], &["R09"]),
    ];
    Vocabulary::new(terms, None).expect("valid synthetic vocabulary")
}

/// Global citation counts for the 21 most-cited patent families. They sum
/// to 146 and the smallest (3) exceeds every other family's count.
pub const PATENT_TOP_CITES: [u64; 21] = [17, 16, 13, 11, 10, 9, 8, 7, 7, 6, 6, 5, 5, 4, 4, 3, 3, 3, 3, 3, 3];

const PATENT_TOPICS: [&str; 4] = [
    "Recombinant vaccine comprising a filovirus glycoprotein",
    "Monoclonal antibodies for treating filovirus infection",
    "Diagnostic assay detecting Ebola virus nucleic acid",
    "Antiviral compound inhibiting viral entry",
];

/// 102 patent families. The 21 most cited form four small components of 16
/// families (a 4-clique held mainly by one assignee, a 4-path, a 4-star and
/// another 4-path) plus five isolates. The remaining 81 families hold 42
/// global citations and cite into the top group and outside the corpus.
pub fn patents_102() -> Corpus {
    let id = |i: usize| format!("PF{:03}", i + 1);
    let mut refs: Vec<Vec<String>> = vec![Vec::new(); 102];
    // Families 0..4 clique, 4..8 path, 8..12 star centered on 8, 12..16 path,
    // 16..21 isolates. Later families cite earlier ones.
    let mut link = |a: usize, b: usize| refs[a.max(b)].push(id(a.min(b)));
    for a in 0..4 {
        for b in a + 1..4 {
            link(a, b);
        }
    }
    for base in [4, 12] {
        for k in 0..3 {
            link(base + k, base + k + 1);
        }
    }
    for leaf in 9..12 {
        link(8, leaf);
    }
    for (i, r) in refs.iter_mut().enumerate().skip(21) {
        r.push(format!("EXT-{:03}", i));
        if i % 3 == 0 {
            r.push(id(i - 1));
        }
    }
    let mut docs = Vec::with_capacity(102);
    for (i, r) in refs.into_iter().enumerate() {
        let cites = if i < 21 {
            PATENT_TOP_CITES[i]
        } else {
            u64::from(i - 21 < 42)
        };
        let assignees = match i {
            0..=2 => vec!["ArmyX".to_string()],
            3 => vec!["UnivY".to_string()],
            _ => vec![format!("Company {}", (i % 9) + 1)],
        };
        docs.push(DocumentRecord {
            id: id(i),
            kind: DocumentKind::PatentFamily,
            title: format!("{} ({})", PATENT_TOPICS[i % 4], i + 1),
            abstract_text: format!(
                "{}. The invention relates to compositions and methods for {}.",
                PATENT_TOPICS[i % 4],
                ["immunization", "treatment", "detection", "inhibition"][i % 4]
            ),
            year: 1996 + (i % 20) as i32,
            authors: vec![],
            assignees,
            venue: None,
            times_cited_global: cites,
            references: r,
        });
    }
    Corpus::new(DocumentKind::PatentFamily, docs, "synthetic:patents_102").expect("valid synthetic corpus")
}

/// Splits `total` over `n` slots as evenly as possible, larger parts first.
fn spread(total: u64, n: usize) -> Vec<u64> {
    let base = total / n as u64;
    let extra = (total % n as u64) as usize;
    (0..n).map(|i| base + u64::from(i < extra)).collect()
}

/// Global citation counts: the first `n_top` are strictly greater than the
/// rest, descend, and sum to `top_sum`; the remaining `n_rest` sum to
/// `rest_sum`. Panics when the sums cannot be met with that separation.
pub fn citation_counts(n_top: usize, top_sum: u64, n_rest: usize, rest_sum: u64) -> Vec<u64> {
    let rest = spread(rest_sum, n_rest);
    let floor = rest.first().copied().unwrap_or(0) + 1;
    let ramp: u64 = (0..n_top as u64).sum();
    assert!(top_sum >= floor * n_top as u64 + ramp, "top sum too small");
    let mut top: Vec<u64> = (0..n_top).map(|i| floor + (n_top - 1 - i) as u64).collect();
    for (v, add) in top.iter_mut().zip(spread(top_sum - floor * n_top as u64 - ramp, n_top)) {
        *v += add;
    }
    top.extend(rest);
    top
}

/// 752 papers whose 151 most cited hold 18,260 of 28,970 global citations,
/// with no tie at the selection boundary. No references.
pub fn share_fixture_752() -> Corpus {
    let counts = citation_counts(151, 18_260, 601, 28_970 - 18_260);
    let docs = counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            paper(
                format!("S{:04}", i + 1),
                format!("Share fixture paper {}", i + 1),
                String::new(),
                2000,
                c,
                vec![],
                COUNTRIES[i % COUNTRIES.len()],
            )
        })
        .collect();
    Corpus::new(DocumentKind::Paper, docs, "synthetic:share_752").expect("valid synthetic corpus")
}

/// A paper corpus of `n` documents spread over the three themes. Each paper
/// cites earlier papers of its own theme with probability `p_in` and of
/// other themes with probability `p_out`; global counts are random.
pub fn synthetic_papers(n: usize, p_in: f64, p_out: f64, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theme_of: Vec<usize> = (0..n).map(|_| rng.random_range(0..THEMES.len())).collect();
    let id = |i: usize| format!("P{:05}", i);
    let docs = (0..n)
        .map(|i| {
            let t = theme_of[i];
            let refs = (0..i)
                .filter(|&k| rng.random::<f64>() < if theme_of[k] == t { p_in } else { p_out })
                .map(id)
                .collect();
            let theme = &THEMES[t];
            let j = rng.random_range(0..20usize);
            paper(
                id(i),
                format!("{} ({})", theme.titles[j % 4], i),
                theme_abstract(theme, j),
                1990 + (i * 30 / n.max(1)) as i32,
                rng.random_range(0..500u64),
                refs,
                COUNTRIES[rng.random_range(0..COUNTRIES.len())],
            )
        })
        .collect();
    Corpus::new(DocumentKind::Paper, docs, "synthetic:papers").expect("valid synthetic corpus")
}

/// Group sizes of the planted-partition benchmark.
pub const PLANTED_GROUP_SIZES: [usize; 7] = [33, 31, 23, 22, 17, 15, 9];

/// Link probabilities of the standard planted-partition fixture: dense
/// groups joined by roughly twenty bridging edges in total.
pub const PLANTED_P_IN: f64 = 0.5;
pub const PLANTED_P_OUT: f64 = 0.002;

/// A planted-partition citation graph: node pairs inside a group are linked
/// with probability `p_in`, across groups with `p_out`, in a random
/// direction. Returns the graph and each node's group.
pub fn planted_partition(sizes: &[usize], p_in: f64, p_out: f64, seed: u64) -> (CitationGraph, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(g, &s)| std::iter::repeat_n(g, s))
        .collect();
    let n = groups.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let p = if groups[a] == groups[b] { p_in } else { p_out };
            if rng.random::<f64>() < p {
                edges.push(if rng.random::<bool>() { (a, b) } else { (b, a) });
            }
        }
    }
    let nodes = (0..n).map(|i| format!("N{i:03}")).collect();
    let g = CitationGraph::from_indices(DocumentKind::Paper, nodes, edges).expect("valid planted graph");
    (g, groups)
}

/// A 16-family patent network: one 4-clique and three random 4-node trees.
/// Node ids are shuffled. Returns the graph and the clique's ids.
pub fn planted_clique_16(seed: u64) -> (CitationGraph, BTreeSet<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..16).collect();
    labels.shuffle(&mut rng);
    let mut edges = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            edges.push((a, b));
        }
    }
    for base in [4, 8, 12] {
        // Random recursive tree on four nodes.
        for k in 1..4 {
            let parent = rng.random_range(0..k);
            edges.push((base + k, base + parent));
        }
    }
    let nodes: Vec<String> = labels.iter().map(|l| format!("F{l:02}")).collect();
    let clique = nodes[..4].iter().cloned().collect();
    let g = CitationGraph::from_indices(DocumentKind::PatentFamily, nodes, edges).expect("valid planted graph");
    (g, clique)
}
