//! The `.cs` text format.
//!
//! ```text
//! # comment
//! X1 = term a
//! X2 = term \x0a
//! X3 = cat X1 X2
//! X4 = rep X3 5
//! X5 = pretrunc X4 2
//! X6 = suftrunc X5 1
//! ```
//!
//! One rule per line, numbered consecutively from `X1`; the last rule is the
//! root. Terminal symbols outside printable ASCII (and space, `#`, `\`) are
//! written as `\xNN`. A line `#!sequence X<i>` marks `X<i>..X<n>` as the
//! top-level phrase chain; every other reader can treat it as a comment.

use std::fmt::Write as _;

use super::{CollageSystem, Rule, Var};
use crate::error::{Error, Result};

const SEQUENCE_PRAGMA: &str = "#!sequence";

/// Parses a `.cs` document.
pub fn parse(input: &[u8]) -> Result<CollageSystem> {
    let input = std::str::from_utf8(input).map_err(|e| {
        let line = input[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        Error::syntax(line, "input is not valid UTF-8")
    })?;

    let mut rules = Vec::new();
    let mut sequence_start = None;
    for (line_idx, raw) in input.lines().enumerate() {
        let line_no = line_idx + 1;
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix(SEQUENCE_PRAGMA) {
            let var = parse_var(rest.trim(), line_no)?;
            sequence_start = Some(var.index());
            continue;
        }
        let content = match trimmed.find('#') {
            Some(pos) => &trimmed[..pos],
            None => trimmed,
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let rule = parse_rule(&tokens, line_no, rules.len() + 1)?;
        rules.push(rule);
    }

    if rules.is_empty() {
        return Err(Error::syntax(input.lines().count().max(1), "no rules"));
    }
    match sequence_start {
        Some(start) => CollageSystem::with_sequence_part(rules, start),
        None => CollageSystem::new(rules),
    }
}

fn parse_rule(tokens: &[&str], line: usize, expected_id: usize) -> Result<Rule> {
    if tokens.len() < 3 || tokens[1] != "=" {
        return Err(Error::syntax(line, "expected `X<i> = <op> ...`"));
    }
    let var = parse_var(tokens[0], line)?;
    if var.number() != expected_id {
        return Err(Error::syntax(
            line,
            format!("expected X{expected_id}, found {}", tokens[0]),
        ));
    }
    let args = &tokens[3..];
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::syntax(
                line,
                format!("`{}` takes {n} operand(s), found {}", tokens[2], args.len()),
            ))
        }
    };
    let rule = match tokens[2] {
        "term" => {
            arity(1)?;
            let bytes = unescape(args[0]).map_err(|reason| Error::syntax(line, reason))?;
            match bytes.as_slice() {
                [b] => Rule::Terminal(*b),
                _ => return Err(Error::syntax(line, "terminal must be exactly one byte")),
            }
        }
        "cat" => {
            arity(2)?;
            Rule::Concat(parse_var(args[0], line)?, parse_var(args[1], line)?)
        }
        "rep" => {
            arity(2)?;
            Rule::Repeat {
                base: parse_var(args[0], line)?,
                power: parse_int(args[1], line)?,
            }
        }
        "pretrunc" => {
            arity(2)?;
            Rule::PrefTrunc {
                base: parse_var(args[0], line)?,
                cut: parse_int(args[1], line)?,
            }
        }
        "suftrunc" => {
            arity(2)?;
            Rule::SufTrunc {
                base: parse_var(args[0], line)?,
                cut: parse_int(args[1], line)?,
            }
        }
        other => return Err(Error::syntax(line, format!("unknown operation `{other}`"))),
    };
    Ok(rule)
}

fn parse_var(token: &str, line: usize) -> Result<Var> {
    let number = token
        .strip_prefix('X')
        .and_then(|digits| digits.parse::<usize>().ok())
        .filter(|&n| n >= 1 && n <= u32::MAX as usize)
        .ok_or_else(|| Error::syntax(line, format!("`{token}` is not a variable")))?;
    Ok(Var::named(number))
}

fn parse_int(token: &str, line: usize) -> Result<u64> {
    token
        .parse::<u64>()
        .map_err(|_| Error::syntax(line, format!("`{token}` is not a non-negative integer")))
}

/// Renders a system in the `.cs` format. `parse(serialize(cs))` reproduces `cs`.
pub fn serialize(cs: &CollageSystem) -> String {
    let mut out = String::new();
    if let Some(start) = cs.sequence_start() {
        let _ = writeln!(out, "{SEQUENCE_PRAGMA} {}", Var::from_index(start));
    }
    for (var, rule) in cs.vars().zip(cs.rules()) {
        let _ = match *rule {
            Rule::Terminal(b) => writeln!(out, "{var} = term {}", escape_byte(b, true)),
            Rule::Concat(l, r) => writeln!(out, "{var} = cat {l} {r}"),
            Rule::Repeat { base, power } => writeln!(out, "{var} = rep {base} {power}"),
            Rule::PrefTrunc { base, cut } => writeln!(out, "{var} = pretrunc {base} {cut}"),
            Rule::SufTrunc { base, cut } => writeln!(out, "{var} = suftrunc {base} {cut}"),
        };
    }
    out
}

/// Escapes one byte. Printable ASCII passes through except `\`; with
/// `token` set, space and `#` are escaped too so the result survives
/// whitespace tokenization and comment stripping.
pub fn escape_byte(b: u8, token: bool) -> String {
    let plain = matches!(b, 0x21..=0x7e) && b != b'\\' && !(token && b == b'#');
    let plain = plain || (!token && b == b' ');
    if plain {
        (b as char).to_string()
    } else {
        format!("\\x{b:02x}")
    }
}

/// Escapes a byte string for TSV output.
pub fn escape_bytes(bytes: &[u8]) -> String {
    bytes.iter().map(|&b| escape_byte(b, false)).collect()
}

/// Inverse of [`escape_bytes`]; also accepts raw printable ASCII.
pub fn unescape(token: &str) -> std::result::Result<Vec<u8>, String> {
    let bytes = token.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'\\' {
            let hex = bytes
                .get(i + 1..i + 4)
                .filter(|h| h[0] == b'x')
                .and_then(|h| std::str::from_utf8(&h[1..]).ok())
                .and_then(|h| u8::from_str_radix(h, 16).ok())
                .ok_or_else(|| format!("bad escape in `{token}`"))?;
            out.push(hex);
            i += 4;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::tests::cabcaabc;
    use proptest::prelude::*;

    const CABCAABC: &str = "\
# cabcaabc
X1 = term a
X2 = term b
X3 = term c
X4 = cat X1 X2
X5 = cat X4 X3
X6 = rep X5 3
X7 = suftrunc X6 2
X8 = cat X7 X5
X9 = pretrunc X8 2   # root
";

    #[test]
    fn parses_running_example() {
        let cs = parse(CABCAABC.as_bytes()).unwrap();
        assert_eq!(cs, cabcaabc());
        assert_eq!(cs.len(), 9);
    }

    #[test]
    fn single_terminal() {
        let cs = parse(b"X1 = term a").unwrap();
        assert_eq!(cs.rules(), &[Rule::Terminal(b'a')]);
    }

    #[test]
    fn forward_reference_is_a_validation_error() {
        let err = parse(b"X1 = cat X2 X3").unwrap_err();
        assert!(matches!(err, Error::Validation { rule: 1, .. }), "{err}");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse(b"X1 = term a\n\nX2 = frob X1\n").unwrap_err();
        assert_eq!(err, Error::syntax(3, "unknown operation `frob`"));
        assert!(matches!(parse(b"X1 = term ab"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse(b"X2 = term a"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse(b"X1 = term a\nX2 = rep X1"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse(b"X1 = term \\xZZ"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse(b"# nothing\n"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn escaped_terminals() {
        let cs = parse(b"X1 = term \\x0a\nX2 = term \\x23\nX3 = cat X1 X2").unwrap();
        assert_eq!(cs.rule(Var::named(1)), Rule::Terminal(b'\n'));
        assert_eq!(cs.rule(Var::named(2)), Rule::Terminal(b'#'));
        let text = serialize(&cs);
        assert!(text.contains("term \\x0a"));
        assert!(text.contains("term \\x23"));
    }

    #[test]
    fn sequence_pragma_round_trips() {
        let src = "#!sequence X4\nX1 = term a\nX2 = term b\nX3 = cat X1 X2\nX4 = cat X3 X3\n";
        let cs = parse(src.as_bytes()).unwrap();
        assert_eq!(cs.sequence_start(), Some(3));
        assert_eq!(serialize(&cs), src);
    }

    #[test]
    fn tsv_escaping() {
        assert_eq!(escape_bytes(b"a b\t\\"), "a b\\x09\\x5c");
        assert_eq!(unescape("a\\x09\\x5c").unwrap(), b"a\t\\");
    }

    fn arb_system() -> impl Strategy<Value = CollageSystem> {
        (any::<u64>(), 1usize..30).prop_map(|(seed, n)| {
            let config = crate::compressors::RandomConfig {
                rules: n,
                alphabet: 256,
                ..Default::default()
            };
            crate::compressors::random_system(&config, seed)
        })
    }

    proptest! {
        #[test]
        fn serialize_parse_round_trip(cs in arb_system()) {
            let text = serialize(&cs);
            prop_assert_eq!(parse(text.as_bytes()).unwrap(), cs);
        }

        #[test]
        fn byte_escaping_round_trips(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
            prop_assert_eq!(unescape(&escape_bytes(&bytes)).unwrap(), bytes);
        }
    }
}
