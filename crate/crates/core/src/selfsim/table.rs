use serde::{Deserialize, Serialize};

use super::word::{Letter, Word};
use super::{builtin, SelfSimError};
use crate::perm::Perm;
use crate::periodic;
use crate::treecore::{BoundaryRay, ValencySequence};

/// Root permutation and level-1 sections of one generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub perm: Perm,
    pub sections: Vec<Word>,
}

/// A self-similar presentation `g = (g_0, …, g_{d-1}) σ_g`.
///
/// Rules may depend on the depth at which a generator acts. Depths are
/// mapped to a finite set of *keys* by an eventually periodic pattern:
/// depth `j` has key `j` below `pre`, and `pre + (j − pre) mod period`
/// beyond. Sections of a rule with key `k` are read at the next key.
#[derive(Clone, Debug)]
pub struct RecursionTable {
    label: String,
    valency: ValencySequence,
    names: Vec<String>,
    rules: Vec<Vec<Rule>>,
    inverse_rules: Vec<Vec<Rule>>,
    pre: usize,
    period: usize,
    omega: Option<BoundaryRay>,
}

impl RecursionTable {
    /// A table whose rules do not depend on the level. The valency must be
    /// constant.
    pub fn new(label: &str, valency: ValencySequence, names: Vec<String>, rules: Vec<Rule>) -> Result<Self, SelfSimError> {
        if valency.regular_degree().is_none() {
            return Err(SelfSimError::InvalidTable(
                "a level-independent table needs a regular tree".into(),
            ));
        }
        Self::with_levels(label, valency, names, vec![rules], 0, 1, None)
    }

    /// A level-indexed table: `rules[key]` applies at depths with that key.
    pub(crate) fn with_levels(
        label: &str,
        valency: ValencySequence,
        names: Vec<String>,
        rules: Vec<Vec<Rule>>,
        pre: usize,
        period: usize,
        omega: Option<BoundaryRay>,
    ) -> Result<Self, SelfSimError> {
        if names.is_empty() {
            return Err(SelfSimError::InvalidTable("no generators".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if n.is_empty() || n == "1" || !seen.insert(n) {
                return Err(SelfSimError::InvalidTable(format!("bad or repeated generator name {n:?}")));
            }
        }
        if rules.len() != pre + period {
            return Err(SelfSimError::InvalidTable("rule count does not match level keys".into()));
        }
        let mut table = RecursionTable {
            label: label.to_string(),
            valency,
            names,
            rules,
            inverse_rules: Vec::new(),
            pre,
            period,
            omega,
        };
        table.validate()?;
        table.inverse_rules = table
            .rules
            .iter()
            .map(|row| {
                row.iter()
                    .map(|r| {
                        let inv = r.perm.inverse();
                        Rule {
                            sections: (0..r.sections.len())
                                .map(|x| r.sections[inv.image(x)].inverse())
                                .collect(),
                            perm: inv,
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(table)
    }

    fn validate(&self) -> Result<(), SelfSimError> {
        for key in 0..self.num_keys() {
            let d = self.degree_at_key(key);
            for j in self.depths_with_key(key) {
                if self.valency.degree(j + 1) != d {
                    return Err(SelfSimError::InvalidTable(format!(
                        "level keys do not follow the valency at depth {j}"
                    )));
                }
            }
            let row = &self.rules[key];
            if row.len() != self.names.len() {
                return Err(SelfSimError::InvalidTable(format!("key {key}: missing rules")));
            }
            for (g, rule) in row.iter().enumerate() {
                if rule.perm.degree() != d || rule.sections.len() != d {
                    return Err(SelfSimError::InvalidTable(format!(
                        "generator {}: expected degree {d}, got permutation of degree {} and {} sections",
                        self.names[g],
                        rule.perm.degree(),
                        rule.sections.len()
                    )));
                }
                if rule.sections.iter().flat_map(|w| w.letters()).any(|l| l.gen >= self.names.len()) {
                    return Err(SelfSimError::InvalidTable(format!(
                        "generator {}: section refers to an undeclared symbol",
                        self.names[g]
                    )));
                }
            }
        }
        Ok(())
    }

    /// A few depths with the given key, enough to cover both periods.
    fn depths_with_key(&self, key: usize) -> Vec<usize> {
        let span = self.valency.preperiod().len().max(self.pre)
            + periodic::lcm(self.valency.period().len(), self.period);
        (0..span + self.period).filter(|&j| self.key(j) == key).collect()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn valency(&self) -> &ValencySequence {
        &self.valency
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_generators(&self) -> usize {
        self.names.len()
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_level_indexed(&self) -> bool {
        self.omega.is_some() || self.rules.len() > 1
    }

    pub fn omega(&self) -> Option<&BoundaryRay> {
        self.omega.as_ref()
    }

    pub fn num_keys(&self) -> usize {
        self.rules.len()
    }

    /// Key of the rules acting at vertices of depth `depth`.
    pub fn key(&self, depth: usize) -> usize {
        if depth < self.pre {
            depth
        } else {
            self.pre + (depth - self.pre) % self.period
        }
    }

    pub fn next_key(&self, key: usize) -> usize {
        if key + 1 < self.pre + self.period {
            key + 1
        } else {
            self.pre
        }
    }

    /// Smallest depth having this key.
    pub fn depth_of_key(&self, key: usize) -> usize {
        key
    }

    pub fn degree_at_key(&self, key: usize) -> usize {
        self.rules[key][0].perm.degree()
    }

    pub fn rule(&self, key: usize, gen: usize) -> &Rule {
        &self.rules[key][gen]
    }

    fn letter_rule(&self, key: usize, l: Letter) -> &Rule {
        if l.inverse {
            &self.inverse_rules[key][l.gen]
        } else {
            &self.rules[key][l.gen]
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, SelfSimError> {
        Word::parse(text, &self.names)
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display(&self.names).to_string()
    }

    /// Root permutation of `w` at a key.
    pub fn word_perm(&self, key: usize, w: &Word) -> Perm {
        let d = self.degree_at_key(key);
        w.letters()
            .iter()
            .fold(Perm::identity(d), |acc, &l| acc.then(&self.letter_rule(key, l).perm))
    }

    /// `(x·w, w_x)`: image of the symbol `x` and the section of `w` there,
    /// freely reduced.
    pub fn word_step(&self, key: usize, w: &Word, x: usize) -> (usize, Word) {
        let mut y = x;
        let mut out = Word::empty();
        for &l in w.letters() {
            let rule = self.letter_rule(key, l);
            for &s in rule.sections[y].letters() {
                out.push(s);
            }
            y = rule.perm.image(y);
        }
        (y, out)
    }

    pub fn to_json(&self) -> TableJson {
        TableJson {
            valency: self.valency.clone(),
            generators: (0..self.names.len())
                .map(|g| {
                    let r = &self.rules[0][g];
                    GeneratorJson {
                        name: self.names[g].clone(),
                        root_perm: r.perm.to_vec(),
                        sections: r.sections.iter().map(|w| self.display_word(w)).collect(),
                    }
                })
                .collect(),
            level_indexed: self.is_level_indexed(),
            omega: self.omega.clone(),
        }
    }

    pub fn from_json(j: &TableJson) -> Result<Self, SelfSimError> {
        if j.level_indexed {
            let omega = j
                .omega
                .as_ref()
                .ok_or_else(|| SelfSimError::InvalidTable("level-indexed table without omega".into()))?;
            let table = builtin::grigorchuk_omega(omega)?;
            let names: Vec<&str> = j.generators.iter().map(|g| g.name.as_str()).collect();
            if !names.is_empty() && names != ["a", "b", "c", "d"] {
                return Err(SelfSimError::InvalidTable(
                    "level-indexed tables are rebuilt from omega and use generators a, b, c, d".into(),
                ));
            }
            return Ok(table);
        }
        let names: Vec<String> = j.generators.iter().map(|g| g.name.clone()).collect();
        let rules = j
            .generators
            .iter()
            .map(|g| {
                let perm = Perm::from_images(g.root_perm.clone())
                    .map_err(|e| SelfSimError::InvalidTable(format!("generator {}: {e}", g.name)))?;
                let sections = g
                    .sections
                    .iter()
                    .map(|s| Word::parse(s, &names))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Rule { perm, sections })
            })
            .collect::<Result<Vec<_>, SelfSimError>>()?;
        RecursionTable::new("custom", j.valency.clone(), names, rules)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub root_perm: Vec<usize>,
    pub sections: Vec<String>,
}

/// JSON form of a recursion table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub valency: ValencySequence,
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub level_indexed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<BoundaryRay>,
}
