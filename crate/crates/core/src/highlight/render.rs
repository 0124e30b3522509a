use serde::Serialize;

use super::{invalid_regions, Scope, Token};

#[derive(Serialize)]
struct TokenRecord<'a> {
    start: usize,
    end: usize,
    scope: &'static str,
    text: &'a str,
}

/// JSON array of `{start, end, scope, text}` records in source order.
pub fn emit_tokens_json(tokens: &[Token], text: &str) -> String {
    let mut records: Vec<TokenRecord> = tokens
        .iter()
        .map(|t| TokenRecord {
            start: t.span.start,
            end: t.span.end,
            scope: t.scope.as_str(),
            text: t.span.slice(text),
        })
        .collect();
    records.sort_by_key(|r| r.start);
    serde_json::to_string(&records).expect("token records always serialize")
}

fn css_class(scope: Scope) -> &'static str {
    match scope {
        Scope::Keyword => "keyword",
        Scope::Variable => "variable",
        Scope::Name => "name",
        Scope::TypeName => "type-name",
        Scope::Number => "number",
        Scope::Comment => "comment",
        Scope::Requirement => "requirement",
        Scope::Punctuation => "punctuation",
        Scope::Unscoped => "unscoped",
    }
}

fn escape_into(out: &mut String, s: &str) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
}

const STYLE: &str = "\
body { background: #272822; color: #f8f8f2; }
pre { font-family: monospace; }
.keyword { color: #f92672; }
.variable { color: #fd971f; }
.name { color: #a6e22e; }
.type-name { color: #66d9ef; font-style: italic; }
.number { color: #ae81ff; }
.comment { color: #75715e; }
.requirement { color: #e6db74; }
.punctuation { color: #b0b0a8; }
.unscoped { color: #ffffff; }
";

/// Standalone HTML page. Each invalid region becomes a single
/// `class="unscoped"` span; every other non-whitespace token gets a span
/// whose class names its scope.
pub fn render_html(tokens: &[Token], text: &str) -> String {
    let regions = invalid_regions(tokens);
    let mut body = String::new();
    let mut regions = regions.iter().peekable();
    let mut skip_until = 0;
    for token in tokens {
        if token.span.start < skip_until {
            continue;
        }
        if let Some(region) = regions.next_if(|r| r.start == token.span.start) {
            body.push_str("<span class=\"unscoped\">");
            escape_into(&mut body, region.slice(text));
            body.push_str("</span>");
            skip_until = region.end;
            continue;
        }
        let slice = token.span.slice(text);
        if token.kind == super::TokenKind::Whitespace {
            body.push_str(slice);
        } else {
            body.push_str("<span class=\"");
            body.push_str(css_class(token.scope));
            body.push_str("\">");
            escape_into(&mut body, slice);
            body.push_str("</span>");
        }
    }
    format!(
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>PDDL</title>\n\
         <style>\n{STYLE}</style>\n</head>\n<body>\n<pre>{body}</pre>\n</body>\n</html>\n"
    )
}
