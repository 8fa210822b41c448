//! Labeled ordered trees in bracketed (Penn-Treebank-style) notation.

use std::fmt;

use thiserror::Error;

/// Errors raised while reading a bracketed tree. Offsets are byte offsets into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeParseError {
    #[error("unbalanced parentheses at byte {offset}")]
    UnbalancedParens { offset: usize },
    #[error("empty label at byte {offset}")]
    EmptyLabel { offset: usize },
    #[error("trailing input at byte {offset}")]
    TrailingInput { offset: usize },
    #[error("expected '(' at byte {offset}")]
    ExpectedOpenParen { offset: usize },
}

/// Invalid label handed to one of the [`ParseTree`] constructors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid tree label {0:?}: labels must be non-empty and free of whitespace and parentheses")]
pub struct InvalidLabel(pub String);

/// A labeled ordered tree.
///
/// Nodes written as bare atoms inside a bracket, like `the` in `(DT the)`, are
/// *tokens*: surface words hanging off a preterminal. Every node written with
/// its own parentheses, including childless ones such as `(A)`, is structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParseTree {
    label: String,
    token: bool,
    children: Vec<ParseTree>,
}

fn valid_label(label: &str) -> bool {
    !label.is_empty() && !label.chars().any(|c| c.is_whitespace() || c == '(' || c == ')')
}

impl ParseTree {
    pub fn node(label: impl Into<String>, children: Vec<ParseTree>) -> Result<Self, InvalidLabel> {
        let label = label.into();
        if !valid_label(&label) {
            return Err(InvalidLabel(label));
        }
        Ok(Self { label, token: false, children })
    }

    pub fn leaf(label: impl Into<String>) -> Result<Self, InvalidLabel> {
        Self::node(label, Vec::new())
    }

    pub fn token(word: impl Into<String>) -> Result<Self, InvalidLabel> {
        let mut tree = Self::leaf(word)?;
        tree.token = true;
        Ok(tree)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn children(&self) -> &[ParseTree] {
        &self.children
    }

    pub fn is_token(&self) -> bool {
        self.token
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ParseTree::node_count).sum::<usize>()
    }

    /// Number of levels; a lone root has depth 1.
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(ParseTree::depth).max().unwrap_or(0)
    }

    /// Copy of the tree restricted to nodes at depth `<= level` (the root is level 1).
    /// A level of 0 is treated as 1.
    pub fn prune_to_level(&self, level: usize) -> ParseTree {
        let level = level.max(1);
        ParseTree {
            label: self.label.clone(),
            token: self.token,
            children: if level == 1 {
                Vec::new()
            } else {
                self.children.iter().map(|c| c.prune_to_level(level - 1)).collect()
            },
        }
    }

    /// Copy of the tree with every token leaf removed; preterminal labels stay.
    pub fn strip_tokens(&self) -> ParseTree {
        ParseTree {
            label: self.label.clone(),
            token: self.token,
            children: self
                .children
                .iter()
                .filter(|c| !c.token)
                .map(ParseTree::strip_tokens)
                .collect(),
        }
    }

    /// Nodes in preorder.
    pub fn preorder(&self) -> Vec<&ParseTree> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(node.children.iter().rev());
        }
        out
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.token {
            return f.write_str(&self.label);
        }
        write!(f, "({}", self.label)?;
        for child in &self.children {
            write!(f, " {child}")?;
        }
        f.write_str(")")
    }
}

impl std::str::FromStr for ParseTree {
    type Err = TreeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_bracketed(s)
    }
}

/// Parse a single bracketed tree such as `(S (NP (DT the) (NN cat)) (VP (VBD sat)))`.
///
/// Surrounding whitespace is ignored. Anything after the closing parenthesis of
/// the root is rejected.
pub fn parse_bracketed(text: &str) -> Result<ParseTree, TreeParseError> {
    let bytes = text.as_bytes();
    let mut pos = skip_ws(text, 0);
    if pos >= bytes.len() || bytes[pos] != b'(' {
        return Err(TreeParseError::ExpectedOpenParen { offset: pos });
    }

    // Open nodes, innermost last.
    let mut stack: Vec<ParseTree> = Vec::new();
    let mut root = None;
    let mut open_offsets: Vec<usize> = Vec::new();

    while pos < bytes.len() {
        match bytes[pos] {
            b'(' => {
                let open = pos;
                pos += 1;
                let (label, end) = read_atom(text, skip_ws(text, pos));
                if label.is_empty() {
                    return Err(TreeParseError::EmptyLabel { offset: open });
                }
                stack.push(ParseTree { label: label.to_string(), token: false, children: Vec::new() });
                open_offsets.push(open);
                pos = end;
            }
            b')' => {
                let node = stack.pop().ok_or(TreeParseError::UnbalancedParens { offset: pos })?;
                open_offsets.pop();
                pos += 1;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None => {
                        root = Some(node);
                        break;
                    }
                }
            }
            c if (c as char).is_ascii_whitespace() => pos = skip_ws(text, pos),
            _ => {
                let (word, end) = read_atom(text, pos);
                let parent = stack.last_mut().expect("atoms only appear inside an open node");
                if word.is_empty() {
                    // Non-ASCII whitespace that skip_ws has not consumed.
                    pos = end.max(pos + text[pos..].chars().next().map_or(1, char::len_utf8));
                    continue;
                }
                parent.children.push(ParseTree { label: word.to_string(), token: true, children: Vec::new() });
                pos = end;
            }
        }
    }

    let Some(root) = root else {
        let offset = open_offsets.first().copied().unwrap_or(pos);
        return Err(TreeParseError::UnbalancedParens { offset });
    };
    let rest = skip_ws(text, pos);
    if rest < bytes.len() {
        return Err(if bytes[rest] == b')' {
            TreeParseError::UnbalancedParens { offset: rest }
        } else {
            TreeParseError::TrailingInput { offset: rest }
        });
    }
    Ok(root)
}

fn skip_ws(text: &str, mut pos: usize) -> usize {
    while let Some(c) = text[pos..].chars().next() {
        if !c.is_whitespace() {
            break;
        }
        pos += c.len_utf8();
    }
    pos
}

/// Reads a label or token starting at `pos`; returns it and the end offset.
fn read_atom(text: &str, pos: usize) -> (&str, usize) {
    let end = text[pos..]
        .char_indices()
        .find(|&(_, c)| c.is_whitespace() || c == '(' || c == ')')
        .map_or(text.len(), |(i, _)| pos + i);
    (&text[pos..end], end)
}
