//! Lossless S-expression reader and writer.
//!
//! Every byte of the input ends up in exactly one leaf of the returned
//! forest (an atom, a comment, a whitespace run) or in the parentheses of a
//! list, so [`serialize`] reproduces the input byte-for-byte even when the
//! parentheses do not balance.
//!
//! Recovery rules for malformed input:
//! * a list still open at end of input is closed there, with an
//!   `unclosed-list` error pointing at its opening parenthesis;
//! * a `)` with nothing to close becomes an atom, with a `stray-close` error.

use crate::diagnostic::{ParseDiagnostic, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Atom,
    List,
    Comment,
    Whitespace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SExprNode {
    pub kind: NodeKind,
    /// Verbatim source slice for leaves; empty for lists.
    pub text: String,
    /// Children in source order, trivia included. Lists only.
    pub children: Vec<SExprNode>,
    pub span: Span,
    /// False for a list that ran into end of input.
    pub closed: bool,
}

impl SExprNode {
    fn leaf(kind: NodeKind, text: &str, span: Span) -> Self {
        SExprNode {
            kind,
            text: text.to_owned(),
            children: Vec::new(),
            span,
            closed: true,
        }
    }

    pub fn is_atom(&self) -> bool {
        self.kind == NodeKind::Atom
    }

    pub fn is_list(&self) -> bool {
        self.kind == NodeKind::List
    }

    /// Comments and whitespace.
    pub fn is_trivia(&self) -> bool {
        matches!(self.kind, NodeKind::Comment | NodeKind::Whitespace)
    }

    /// Atom text, or `None` for anything else.
    pub fn atom(&self) -> Option<&str> {
        self.is_atom().then_some(self.text.as_str())
    }

    /// Children that are not comments or whitespace.
    pub fn items(&self) -> impl Iterator<Item = &SExprNode> + '_ {
        self.children.iter().filter(|c| !c.is_trivia())
    }

    /// Text of the first non-trivia child if it is an atom.
    pub fn head(&self) -> Option<&str> {
        self.items().next().and_then(SExprNode::atom)
    }

    /// True if this is a list whose head atom equals `keyword`, ignoring
    /// ASCII case.
    pub fn has_head(&self, keyword: &str) -> bool {
        self.is_list()
            && self
                .head()
                .is_some_and(|h| h.eq_ignore_ascii_case(keyword))
    }

    /// Byte offset of this list's closing parenthesis, if it has one.
    pub fn close_offset(&self) -> Option<usize> {
        (self.is_list() && self.closed).then(|| self.span.end - 1)
    }

    /// Re-emits this node's source text.
    pub fn to_source(&self) -> String {
        let mut out = String::with_capacity(self.span.len());
        write_node(self, &mut out);
        out
    }
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || c == '(' || c == ')' || c == ';'
}

/// Reads `text` into a lossless forest. Never fails; problems are reported
/// as diagnostics.
pub fn parse_sexpr(text: &str) -> (Vec<SExprNode>, Vec<ParseDiagnostic>) {
    let mut diagnostics = Vec::new();
    // Each open list: its start offset and the children collected so far.
    let mut stack: Vec<(usize, Vec<SExprNode>)> = Vec::new();
    let mut top: Vec<SExprNode> = Vec::new();

    let mut chars = text.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        let node = match c {
            '(' => {
                stack.push((start, Vec::new()));
                continue;
            }
            ')' => match stack.pop() {
                Some((open, children)) => SExprNode {
                    kind: NodeKind::List,
                    text: String::new(),
                    children,
                    span: Span::new(open, start + 1),
                    closed: true,
                },
                None => {
                    let span = Span::new(start, start + 1);
                    diagnostics.push(ParseDiagnostic::error(
                        "stray-close",
                        span,
                        "unmatched ')'",
                    ));
                    SExprNode::leaf(NodeKind::Atom, ")", span)
                }
            },
            ';' => {
                let mut end = start + 1;
                while let Some(&(i, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    end = i + c.len_utf8();
                    chars.next();
                }
                SExprNode::leaf(NodeKind::Comment, &text[start..end], Span::new(start, end))
            }
            c if c.is_whitespace() => {
                let mut end = start + c.len_utf8();
                while let Some(&(i, c)) = chars.peek() {
                    if !c.is_whitespace() {
                        break;
                    }
                    end = i + c.len_utf8();
                    chars.next();
                }
                SExprNode::leaf(NodeKind::Whitespace, &text[start..end], Span::new(start, end))
            }
            c => {
                let mut end = start + c.len_utf8();
                while let Some(&(i, c)) = chars.peek() {
                    if is_delimiter(c) {
                        break;
                    }
                    end = i + c.len_utf8();
                    chars.next();
                }
                SExprNode::leaf(NodeKind::Atom, &text[start..end], Span::new(start, end))
            }
        };
        match stack.last_mut() {
            Some((_, children)) => children.push(node),
            None => top.push(node),
        }
    }

    // Close whatever is still open, innermost first.
    while let Some((open, children)) = stack.pop() {
        diagnostics.push(ParseDiagnostic::error(
            "unclosed-list",
            Span::new(open, open + 1),
            "'(' is never closed",
        ));
        let node = SExprNode {
            kind: NodeKind::List,
            text: String::new(),
            children,
            span: Span::new(open, text.len()),
            closed: false,
        };
        match stack.last_mut() {
            Some((_, children)) => children.push(node),
            None => top.push(node),
        }
    }

    diagnostics.sort_by_key(|d| d.span.start);
    (top, diagnostics)
}

fn write_node(node: &SExprNode, out: &mut String) {
    match node.kind {
        NodeKind::List => {
            out.push('(');
            for child in &node.children {
                write_node(child, out);
            }
            if node.closed {
                out.push(')');
            }
        }
        _ => out.push_str(&node.text),
    }
}

/// Writes a forest back to text.
pub fn serialize(forest: &[SExprNode]) -> String {
    let mut out = String::new();
    for node in forest {
        write_node(node, &mut out);
    }
    out
}

/// Every list headed by `keyword` (case-insensitive), depth-first in
/// document order.
pub fn find_blocks<'a>(forest: &'a [SExprNode], keyword: &str) -> Vec<&'a SExprNode> {
    fn walk<'a>(nodes: &'a [SExprNode], keyword: &str, out: &mut Vec<&'a SExprNode>) {
        for node in nodes.iter().filter(|n| n.is_list()) {
            if node.has_head(keyword) {
                out.push(node);
            }
            walk(&node.children, keyword, out);
        }
    }
    let mut out = Vec::new();
    walk(forest, keyword, &mut out);
    out
}
