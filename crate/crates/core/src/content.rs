//! Page content streams: operators, marked-content spans and MCID lookup.

use crate::codec::is_whitespace;
use crate::cos::parser::{Parser, Token};
use crate::cos::{format_real, write_value, CosValue, Dictionary, Document, ObjectId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ContentOp {
    BeginText,
    EndText,
    SetFont {
        font: String,
        size: f64,
    },
    /// Items of a `TJ` array: strings and kerning numbers, kept verbatim.
    ShowText(Vec<CosValue>),
    Transform([f64; 6]),
    BeginMarkedContent {
        tag: String,
        properties: MarkedContentProperties,
    },
    EndMarkedContent,
    /// `BI … ID <data> EI`.
    InlineImage {
        params: Dictionary,
        data: Vec<u8>,
    },
    Other {
        operator: String,
        operands: Vec<CosValue>,
    },
}

/// Where a marked-content sequence takes its attributes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MarkedContentProperties {
    /// `BMC`: no attributes.
    None,
    Inline(Dictionary),
    /// A key into the page's /Properties resources.
    Named(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkedContentSpan {
    pub tag: String,
    pub properties: MarkedContentProperties,
    pub children: Vec<ContentNode>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ContentNode {
    Op(ContentOp),
    Span(MarkedContentSpan),
}

impl MarkedContentSpan {
    pub fn new(tag: impl Into<String>, properties: MarkedContentProperties) -> Self {
        MarkedContentSpan {
            tag: tag.into(),
            properties,
            children: Vec::new(),
        }
    }

    pub fn inline_properties(&self) -> Option<&Dictionary> {
        match &self.properties {
            MarkedContentProperties::Inline(d) => Some(d),
            _ => None,
        }
    }

    pub fn mcid(&self) -> Option<i64> {
        self.inline_properties().and_then(|d| d.get_i64("MCID"))
    }

    pub fn actual_text(&self) -> Option<String> {
        self.inline_properties().and_then(|d| d.get_text("ActualText"))
    }

    pub fn alt(&self) -> Option<String> {
        self.inline_properties().and_then(|d| d.get_text("Alt"))
    }

    pub fn named_resource(&self) -> Option<&str> {
        match &self.properties {
            MarkedContentProperties::Named(n) => Some(n),
            _ => None,
        }
    }

    /// This span and every nested span, depth first.
    pub fn descendants(&self) -> Vec<&MarkedContentSpan> {
        let mut out = vec![self];
        out.extend(spans(&self.children));
        out
    }
}

/// Every span in the forest, depth first in stream order.
pub fn spans(nodes: &[ContentNode]) -> Vec<&MarkedContentSpan> {
    let mut out = Vec::new();
    for node in nodes {
        if let ContentNode::Span(span) = node {
            out.extend(span.descendants());
        }
    }
    out
}

/// MCIDs in stream order, duplicates included.
pub fn mcids(nodes: &[ContentNode]) -> Vec<i64> {
    spans(nodes).into_iter().filter_map(MarkedContentSpan::mcid).collect()
}

pub fn parse_content(bytes: &[u8]) -> Result<Vec<ContentOp>> {
    let mut parser = Parser::for_content(bytes);
    let mut ops = Vec::new();
    let mut operands = Vec::new();
    let mut in_text = false;
    loop {
        let at = {
            parser.skip_whitespace();
            parser.pos
        };
        let Some(token) = parser.next_token()? else {
            break;
        };
        let operator = match token {
            Token::Value(v) => {
                operands.push(v);
                continue;
            }
            Token::Keyword(k) => k,
        };
        let op = if operator == "BI" {
            if !operands.is_empty() {
                return Err(Error::syntax(at, "operands before BI"));
            }
            inline_image(&mut parser, at)?
        } else {
            build_op(&operator, std::mem::take(&mut operands), at)?
        };
        match op {
            ContentOp::BeginText if in_text => return Err(Error::UnbalancedTextBlock(ops.len())),
            ContentOp::BeginText => in_text = true,
            ContentOp::EndText if !in_text => return Err(Error::UnbalancedTextBlock(ops.len())),
            ContentOp::EndText => in_text = false,
            ContentOp::ShowText(_) if !in_text => return Err(Error::UnbalancedTextBlock(ops.len())),
            _ => {}
        }
        ops.push(op);
    }
    if !operands.is_empty() {
        return Err(Error::syntax(bytes.len(), "operands without an operator"));
    }
    if in_text {
        return Err(Error::UnbalancedTextBlock(ops.len()));
    }
    Ok(ops)
}

fn number(value: &CosValue, at: usize, operator: &str) -> Result<f64> {
    value
        .as_f64()
        .ok_or_else(|| Error::syntax(at, format!("{operator} expects a number")))
}

fn build_op(operator: &str, operands: Vec<CosValue>, at: usize) -> Result<ContentOp> {
    let arity = |n: usize| {
        if operands.len() == n {
            Ok(())
        } else {
            Err(Error::syntax(
                at,
                format!("{operator} takes {n} operands, found {}", operands.len()),
            ))
        }
    };
    Ok(match operator {
        "BT" => {
            arity(0)?;
            ContentOp::BeginText
        }
        "ET" => {
            arity(0)?;
            ContentOp::EndText
        }
        "EMC" => {
            arity(0)?;
            ContentOp::EndMarkedContent
        }
        "Tf" => {
            arity(2)?;
            let font = operands[0]
                .as_name()
                .ok_or_else(|| Error::syntax(at, "Tf expects a font name"))?;
            ContentOp::SetFont {
                font: font.to_string(),
                size: number(&operands[1], at, "Tf")?,
            }
        }
        "TJ" => {
            arity(1)?;
            let items = operands[0]
                .as_array()
                .ok_or_else(|| Error::syntax(at, "TJ expects an array"))?;
            if items
                .iter()
                .any(|i| i.as_string_bytes().is_none() && i.as_f64().is_none())
            {
                return Err(Error::syntax(at, "TJ array holds only strings and numbers"));
            }
            ContentOp::ShowText(items.clone())
        }
        "cm" => {
            arity(6)?;
            let mut m = [0.0; 6];
            for (slot, v) in m.iter_mut().zip(&operands) {
                *slot = number(v, at, "cm")?;
            }
            ContentOp::Transform(m)
        }
        "BDC" => {
            arity(2)?;
            let tag = operands[0]
                .as_name()
                .ok_or_else(|| Error::syntax(at, "BDC expects a tag name"))?
                .to_string();
            let properties = match &operands[1] {
                CosValue::Dictionary(d) => MarkedContentProperties::Inline(d.clone()),
                CosValue::Name(n) => MarkedContentProperties::Named(n.clone()),
                _ => return Err(Error::syntax(at, "BDC expects a dictionary or a name")),
            };
            ContentOp::BeginMarkedContent { tag, properties }
        }
        "BMC" => {
            arity(1)?;
            let tag = operands[0]
                .as_name()
                .ok_or_else(|| Error::syntax(at, "BMC expects a tag name"))?;
            ContentOp::BeginMarkedContent {
                tag: tag.to_string(),
                properties: MarkedContentProperties::None,
            }
        }
        "]" | ">>" | "{" | "}" => return Err(Error::syntax(at, format!("stray `{operator}`"))),
        _ => ContentOp::Other {
            operator: operator.to_string(),
            operands,
        },
    })
}

fn inline_image(parser: &mut Parser<'_>, at: usize) -> Result<ContentOp> {
    let mut params = Dictionary::new();
    loop {
        match parser.next_token()? {
            Some(Token::Keyword(k)) if k == "ID" => break,
            Some(Token::Value(CosValue::Name(key))) => {
                let value = parser.parse_value()?;
                params.push(key, value);
            }
            _ => return Err(Error::syntax(at, "malformed inline image dictionary")),
        }
    }
    let bytes = parser.bytes();
    let start = parser.pos + 1;
    let mut i = start;
    while i + 1 < bytes.len() {
        let before = i == start || is_whitespace(bytes[i - 1]);
        let after = bytes.get(i + 2).is_none_or(|&b| is_whitespace(b));
        if &bytes[i..i + 2] == b"EI" && before && after {
            let mut end = i;
            if end > start && is_whitespace(bytes[end - 1]) {
                end -= 1;
            }
            parser.pos = i + 2;
            return Ok(ContentOp::InlineImage {
                params,
                data: bytes[start.min(end)..end].to_vec(),
            });
        }
        i += 1;
    }
    Err(Error::syntax(at, "inline image without EI"))
}

/// Nests the ops between each BDC/BMC and its EMC.
pub fn build_span_tree(ops: Vec<ContentOp>) -> Result<Vec<ContentNode>> {
    let mut stack: Vec<MarkedContentSpan> = Vec::new();
    let mut top = Vec::new();
    let count = ops.len();
    for (i, op) in ops.into_iter().enumerate() {
        match op {
            ContentOp::BeginMarkedContent { tag, properties } => {
                stack.push(MarkedContentSpan::new(tag, properties));
            }
            ContentOp::EndMarkedContent => {
                let span = stack
                    .pop()
                    .ok_or(Error::UnbalancedMarkedContent { depth: 0, offset: i })?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(ContentNode::Span(span)),
                    None => top.push(ContentNode::Span(span)),
                }
            }
            op => match stack.last_mut() {
                Some(parent) => parent.children.push(ContentNode::Op(op)),
                None => top.push(ContentNode::Op(op)),
            },
        }
    }
    if !stack.is_empty() {
        return Err(Error::UnbalancedMarkedContent {
            depth: stack.len(),
            offset: count,
        });
    }
    Ok(top)
}

/// Parses a stream straight into its span forest.
pub fn parse_span_tree(bytes: &[u8]) -> Result<Vec<ContentNode>> {
    build_span_tree(parse_content(bytes)?)
}

/// The span forest of one page.
pub fn page_span_tree(doc: &Document, page: ObjectId) -> Result<Vec<ContentNode>> {
    parse_span_tree(&doc.page_content(page)?)
}

/// Back to a flat operator list.
pub fn flatten(nodes: &[ContentNode]) -> Vec<ContentOp> {
    let mut out = Vec::new();
    flatten_into(nodes, &mut out);
    out
}

fn flatten_into(nodes: &[ContentNode], out: &mut Vec<ContentOp>) {
    for node in nodes {
        match node {
            ContentNode::Op(op) => out.push(op.clone()),
            ContentNode::Span(span) => {
                out.push(ContentOp::BeginMarkedContent {
                    tag: span.tag.clone(),
                    properties: span.properties.clone(),
                });
                flatten_into(&span.children, out);
                out.push(ContentOp::EndMarkedContent);
            }
        }
    }
}

/// The unique span carrying `mcid`.
pub fn find_span_by_mcid(nodes: &[ContentNode], mcid: i64) -> Result<Option<&MarkedContentSpan>> {
    let mut found = spans(nodes).into_iter().filter(|s| s.mcid() == Some(mcid));
    let first = found.next();
    if found.next().is_some() {
        return Err(Error::DuplicateMcid(mcid));
    }
    Ok(first)
}

/// Checks text-object nesting and marked-content balance of an op list.
pub fn check_well_formed(ops: &[ContentOp]) -> Result<()> {
    let mut in_text = false;
    let mut depth = 0usize;
    for (i, op) in ops.iter().enumerate() {
        match op {
            ContentOp::BeginText if in_text => return Err(Error::WellFormedness(format!("nested BT at operator {i}"))),
            ContentOp::BeginText => in_text = true,
            ContentOp::EndText if !in_text => {
                return Err(Error::WellFormedness(format!("ET without BT at operator {i}")))
            }
            ContentOp::EndText => in_text = false,
            ContentOp::ShowText(_) if !in_text => {
                return Err(Error::WellFormedness(format!("TJ outside BT/ET at operator {i}")))
            }
            ContentOp::BeginMarkedContent { .. } => depth += 1,
            ContentOp::EndMarkedContent if depth == 0 => {
                return Err(Error::WellFormedness(format!("EMC without BDC at operator {i}")))
            }
            ContentOp::EndMarkedContent => depth -= 1,
            _ => {}
        }
    }
    if in_text {
        return Err(Error::WellFormedness("unterminated BT".into()));
    }
    if depth > 0 {
        return Err(Error::WellFormedness(format!(
            "{depth} unclosed marked-content sequences"
        )));
    }
    Ok(())
}

pub fn serialize_content(nodes: &[ContentNode]) -> Result<Vec<u8>> {
    serialize_ops(&flatten(nodes))
}

/// One operator per line.
pub fn serialize_ops(ops: &[ContentOp]) -> Result<Vec<u8>> {
    check_well_formed(ops)?;
    let mut out = Vec::new();
    for op in ops {
        write_op(&mut out, op);
        out.push(b'\n');
    }
    Ok(out)
}

fn format_number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format_real(x)
    }
}

fn write_op(out: &mut Vec<u8>, op: &ContentOp) {
    match op {
        ContentOp::BeginText => out.extend_from_slice(b"BT"),
        ContentOp::EndText => out.extend_from_slice(b"ET"),
        ContentOp::EndMarkedContent => out.extend_from_slice(b"EMC"),
        ContentOp::SetFont { font, size } => {
            write_value(out, &CosValue::Name(font.clone()));
            out.extend_from_slice(format!(" {} Tf", format_number(*size)).as_bytes());
        }
        ContentOp::ShowText(items) => {
            write_value(out, &CosValue::Array(items.clone()));
            out.extend_from_slice(b" TJ");
        }
        ContentOp::Transform(m) => {
            let parts: Vec<String> = m.iter().map(|x| format_number(*x)).collect();
            out.extend_from_slice(format!("{} cm", parts.join(" ")).as_bytes());
        }
        ContentOp::BeginMarkedContent { tag, properties } => {
            write_value(out, &CosValue::Name(tag.clone()));
            match properties {
                MarkedContentProperties::None => out.extend_from_slice(b" BMC"),
                MarkedContentProperties::Inline(d) => {
                    out.push(b' ');
                    write_value(out, &CosValue::Dictionary(d.clone()));
                    out.extend_from_slice(b" BDC");
                }
                MarkedContentProperties::Named(n) => {
                    out.push(b' ');
                    write_value(out, &CosValue::Name(n.clone()));
                    out.extend_from_slice(b" BDC");
                }
            }
        }
        ContentOp::InlineImage { params, data } => {
            out.extend_from_slice(b"BI");
            for (k, v) in params.iter() {
                out.push(b' ');
                write_value(out, &CosValue::Name(k.to_string()));
                out.push(b' ');
                write_value(out, v);
            }
            out.extend_from_slice(b"\nID ");
            out.extend_from_slice(data);
            out.extend_from_slice(b"\nEI");
        }
        ContentOp::Other { operator, operands } => {
            for v in operands {
                write_value(out, v);
                out.push(b' ');
            }
            out.extend_from_slice(operator.as_bytes());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1B: &[u8] = b"/mi <</MCID 9 /ActualText<FEFFD835DC58>\n /Alt(  k  )\n>>BDC\nBT\n/F30 10.9091 Tf\n [(k)]TJ\nET\nEMC\n1 0 0 1 6.023 0 cm\n/mo <</MCID 10 /ActualText<FEFF2208>\n /Alt(  as element of  )\n>>BDC\n1 0 0 1 3.03 0 cm\nBT\n/F33 10.9091 Tf\n [(2)]TJ\nET\nEMC\n1 0 0 1 10.303 0 cm\n/mi <</MCID 11 /ActualText<FEFF211D>\n /Alt(  real numbers  )\n>>BDC\nBT\n/F42 10.9091 Tf\n [(R)]TJ\nET\nEMC\n";

    #[test]
    fn fig1b_ops() {
        let ops = parse_content(FIG1B).unwrap();
        assert!(ops.contains(&ContentOp::SetFont {
            font: "F30".into(),
            size: 10.9091
        }));
        assert!(ops.contains(&ContentOp::ShowText(vec![CosValue::literal(*b"k")])));
        assert!(ops.contains(&ContentOp::Transform([1.0, 0.0, 0.0, 1.0, 6.023, 0.0])));
    }

    #[test]
    fn fake_space_ops() {
        assert_eq!(
            parse_content(b"BT /F79 1 Tf [( )]TJ ET").unwrap(),
            vec![
                ContentOp::BeginText,
                ContentOp::SetFont {
                    font: "F79".into(),
                    size: 1.0
                },
                ContentOp::ShowText(vec![CosValue::literal(*b" ")]),
                ContentOp::EndText,
            ]
        );
        assert!(parse_content(b"").unwrap().is_empty());
    }

    #[test]
    fn fig1b_spans() {
        let tree = parse_span_tree(FIG1B).unwrap();
        let top: Vec<_> = tree
            .iter()
            .filter_map(|n| match n {
                ContentNode::Span(s) => Some((s.tag.as_str(), s.mcid(), s.actual_text())),
                _ => None,
            })
            .collect();
        assert_eq!(
            top,
            vec![
                ("mi", Some(9), Some("\u{1D458}".to_string())),
                ("mo", Some(10), Some("\u{2208}".to_string())),
                ("mi", Some(11), Some("\u{211D}".to_string())),
            ]
        );
        assert_eq!(
            find_span_by_mcid(&tree, 10).unwrap().unwrap().alt().as_deref(),
            Some("  as element of  ")
        );
        assert!(find_span_by_mcid(&tree, 99).unwrap().is_none());
    }

    #[test]
    fn no_marked_content_means_no_spans() {
        let tree = parse_span_tree(b"BT /F1 12 Tf [(Hello)]TJ ET").unwrap();
        assert!(spans(&tree).is_empty());
        assert_eq!(tree.len(), 4);
    }

    #[test]
    fn duplicate_mcid() {
        let tree = parse_span_tree(b"/A <</MCID 9>> BDC EMC /B <</MCID 9>> BDC EMC").unwrap();
        assert_eq!(find_span_by_mcid(&tree, 9), Err(Error::DuplicateMcid(9)));
    }

    #[test]
    fn unbalanced_inputs() {
        assert_eq!(
            parse_span_tree(b"/A BMC /B BMC EMC"),
            Err(Error::UnbalancedMarkedContent { depth: 1, offset: 3 })
        );
        assert_eq!(
            parse_span_tree(b"EMC"),
            Err(Error::UnbalancedMarkedContent { depth: 0, offset: 0 })
        );
        assert_eq!(parse_content(b"[(x)] TJ"), Err(Error::UnbalancedTextBlock(0)));
        assert_eq!(parse_content(b"BT BT"), Err(Error::UnbalancedTextBlock(1)));
        assert!(matches!(parse_content(b"1 2 Tf"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_content(b"1 2"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn bare_show_text_is_refused() {
        let nodes = vec![ContentNode::Op(ContentOp::ShowText(vec![CosValue::literal(*b"x")]))];
        assert!(matches!(serialize_content(&nodes), Err(Error::WellFormedness(_))));
    }

    #[test]
    fn round_trip_keeps_tree() {
        let tree = parse_span_tree(FIG1B).unwrap();
        let bytes = serialize_content(&tree).unwrap();
        assert_eq!(parse_span_tree(&bytes).unwrap(), tree);
        let text = String::from_utf8_lossy(&bytes);
        assert!(text.contains("/Alt (  as element of  )"));
        assert!(text.contains("/ActualText <FEFF2208>"));
    }

    #[test]
    fn inline_images_and_other_ops_survive() {
        let src = b"q 1 0 0 1 0 0 cm BI /W 2 /H 1 /BPC 8 /CS /G ID \x00\xffEI\nEI Q 0.5 g";
        let ops = parse_content(src).unwrap();
        assert_eq!(
            ops[2],
            ContentOp::InlineImage {
                params: Dictionary::new()
                    .with("W", 2i64)
                    .with("H", 1i64)
                    .with("BPC", 8i64)
                    .with("CS", CosValue::name("G")),
                data: b"\x00\xffEI".to_vec(),
            }
        );
        let again = parse_content(&serialize_ops(&ops).unwrap()).unwrap();
        assert_eq!(again, ops);
    }
}
