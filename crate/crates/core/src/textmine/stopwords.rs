use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Identifier of the bundled list, recorded in run reports.
pub const ENGLISH_STOPWORDS_VERSION: &str = "english-v1";

const ENGLISH: &str = "\
a about above after again against all am an and any are aren't as at be
because been before being below between both but by can couldn't did didn't
do does doesn't doing don't down during each few for from further had hadn't
has hasn't have haven't having he he'd he'll he's her here here's hers herself
him himself his how how's i i'd i'll i'm i've if in into is isn't it it's its
itself let's me more most mustn't my myself no nor not of off on once only or
other ought our ours ourselves out over own same shan't she she'd she'll she's
should shouldn't so some such than that that's the their theirs them
themselves then there there's these they they'd they'll they're they've this
those through to too under until up very was wasn't we we'd we'll we're we've
were weren't what what's when when's where where's which while who who's whom
why why's with won't would wouldn't you you'd you'll you're you've your yours
yourself yourselves also can could may might must shall will would however
thus therefore within without upon via among whereas whether
";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords {
    words: HashSet<String>,
    source: String,
}

impl Stopwords {
    /// The bundled English list.
    pub fn english() -> Self {
        Stopwords {
            words: ENGLISH.split_whitespace().map(str::to_string).collect(),
            source: ENGLISH_STOPWORDS_VERSION.to_string(),
        }
    }

    pub fn empty() -> Self {
        Stopwords {
            words: HashSet::new(),
            source: "none".into(),
        }
    }

    /// Whitespace-separated words; `#` starts a comment to end of line.
    pub fn parse(text: &str, source: impl Into<String>) -> Self {
        let words = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .map(|w| w.to_lowercase())
            .collect();
        Stopwords {
            words,
            source: source.into(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Stopwords::parse(&text, format!("file:{}", path.display())))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl Default for Stopwords {
    fn default() -> Self {
        Stopwords::english()
    }
}
