//! Tree file formats.
//!
//! JSON: `{"n":3,"root":0,"parent":[null,0,1]}`.
//! Parent list: line 1 is `n`, line 2 the root id, line 3 the `n` parent ids
//! separated by spaces with `-1` marking the root.

use serde::{Deserialize, Serialize};

use super::{RootedTree, TreeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeFormat {
    Json,
    ParentList,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeJson {
    n: usize,
    root: i64,
    parent: Vec<Option<i64>>,
}

pub fn parse_tree(text: &[u8], format: TreeFormat) -> Result<RootedTree, TreeError> {
    let text = std::str::from_utf8(text).map_err(|e| TreeError::Syntax { line: 1, msg: format!("invalid UTF-8: {e}") })?;
    match format {
        TreeFormat::Json => parse_json(text),
        TreeFormat::ParentList => parse_parent_list(text),
    }
}

pub fn serialize_tree(tree: &RootedTree, format: TreeFormat) -> Vec<u8> {
    match format {
        TreeFormat::Json => {
            let doc = TreeJson {
                n: tree.n(),
                root: tree.root() as i64,
                parent: tree.parents().iter().map(|p| p.map(|p| p as i64)).collect(),
            };
            serde_json::to_vec(&doc).expect("tree json serialization is infallible")
        }
        TreeFormat::ParentList => {
            let parents: Vec<String> = tree
                .parents()
                .iter()
                .map(|p| p.map_or_else(|| "-1".to_string(), |p| p.to_string()))
                .collect();
            format!("{}\n{}\n{}\n", tree.n(), tree.root(), parents.join(" ")).into_bytes()
        }
    }
}

fn to_parents(n: usize, root: i64, raw: &[Option<i64>]) -> Result<(Vec<Option<usize>>, usize), TreeError> {
    if n == 0 {
        return Err(TreeError::Empty);
    }
    if raw.len() != n {
        return Err(TreeError::ParentCount { declared: n, found: raw.len() });
    }
    if root < 0 || root as u64 >= n as u64 {
        return Err(TreeError::RootOutOfRange { root, n });
    }
    let parents = raw
        .iter()
        .enumerate()
        .map(|(v, p)| match *p {
            None => Ok(None),
            Some(p) if p < 0 || p as u64 >= n as u64 => Err(TreeError::ParentOutOfRange { vertex: v, parent: p, n }),
            Some(p) => Ok(Some(p as usize)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((parents, root as usize))
}

fn parse_json(text: &str) -> Result<RootedTree, TreeError> {
    let doc: TreeJson = serde_json::from_str(text).map_err(|e| TreeError::Json(e.to_string()))?;
    let (parents, root) = to_parents(doc.n, doc.root, &doc.parent)?;
    RootedTree::from_parents_with_root(parents, root)
}

fn parse_int(line: usize, tok: &str, what: &str) -> Result<i64, TreeError> {
    tok.parse::<i64>()
        .map_err(|_| TreeError::Syntax { line, msg: format!("expected integer {what}, found {tok:?}") })
}

fn parse_parent_list(text: &str) -> Result<RootedTree, TreeError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());

    let (ln, first) = lines.next().ok_or(TreeError::Syntax { line: 1, msg: "missing vertex count".into() })?;
    let n = parse_int(ln, first, "vertex count")?;
    if n <= 0 {
        return Err(TreeError::Empty);
    }
    let n = n as usize;

    let (ln, second) = lines
        .next()
        .ok_or(TreeError::Syntax { line: ln + 1, msg: "missing root id (unrooted input is rejected)".into() })?;
    let mut toks = second.split_whitespace();
    let root = parse_int(ln, toks.next().unwrap_or_default(), "root id")?;
    if toks.next().is_some() {
        return Err(TreeError::Syntax { line: ln, msg: "root line must hold exactly one id".into() });
    }
    if root == -1 {
        return Err(TreeError::Syntax { line: ln, msg: "root id -1: unrooted input is rejected".into() });
    }

    let (ln, third) = lines.next().ok_or(TreeError::Syntax { line: ln + 1, msg: "missing parent line".into() })?;
    let raw = third
        .split_whitespace()
        .map(|tok| parse_int(ln, tok, "parent id").map(|p| if p == -1 { None } else { Some(p) }))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some((extra, _)) = lines.next() {
        return Err(TreeError::Syntax { line: extra, msg: "unexpected trailing content".into() });
    }
    // -1 aside, negative ids are reported as out of range by `to_parents`.
    let (parents, root) = to_parents(n, root, &raw)?;
    RootedTree::from_parents_with_root(parents, root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_parent_list_agree() {
        let a = parse_tree(br#"{"n":3,"root":0,"parent":[null,0,1]}"#, TreeFormat::Json).unwrap();
        let b = parse_tree(b"3\n0\n-1 0 1", TreeFormat::ParentList).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.children(0), &[1]);
        assert_eq!(a.children(1), &[2]);
    }

    #[test]
    fn json_serialization_is_compact() {
        let t = RootedTree::from_parents(vec![None, Some(0), Some(0)]).unwrap();
        assert_eq!(serialize_tree(&t, TreeFormat::Json), br#"{"n":3,"root":0,"parent":[null,0,0]}"#);
        let p = RootedTree::from_parents(vec![None, Some(0), Some(1)]).unwrap();
        assert_eq!(serialize_tree(&p, TreeFormat::Json), br#"{"n":3,"root":0,"parent":[null,0,1]}"#);
        assert_eq!(serialize_tree(&p, TreeFormat::ParentList), b"3\n0\n-1 0 1\n");
    }

    #[test]
    fn two_roots_rejected() {
        let err = parse_tree(br#"{"n":2,"root":0,"parent":[null,null]}"#, TreeFormat::Json).unwrap_err();
        assert_eq!(err, TreeError::MultipleRoots { first: 0, second: 1 });
    }

    #[test]
    fn distinct_diagnostics() {
        use TreeFormat::*;
        let cases: &[(&[u8], TreeFormat)] = &[
            (b"{\"n\":3,", Json),
            (br#"{"n":3,"root":0,"parent":[null,2,1]}"#, Json),
            (br#"{"n":3,"root":0,"parent":[null,0,5]}"#, Json),
            (br#"{"n":3,"root":0,"parent":[null,0]}"#, Json),
            (br#"{"n":2,"root":0,"parent":[null,0],"parent":[null,0]}"#, Json),
            (b"3\n0\n-1 0 x", ParentList),
            (b"3\n\n", ParentList),
            (b"2\n-1\n-1 0", ParentList),
            (b"2\n1\n-1 0", ParentList),
            (b"2\n0\n-1 -3", ParentList),
        ];
        let errs: Vec<TreeError> = cases.iter().map(|(t, f)| parse_tree(t, *f).unwrap_err()).collect();
        assert!(matches!(errs[0], TreeError::Json(_)));
        assert_eq!(errs[1], TreeError::Cycle { vertex: 1 });
        assert_eq!(errs[2], TreeError::ParentOutOfRange { vertex: 2, parent: 5, n: 3 });
        assert_eq!(errs[3], TreeError::ParentCount { declared: 3, found: 2 });
        assert!(matches!(&errs[4], TreeError::Json(m) if m.contains("duplicate")));
        assert!(matches!(errs[5], TreeError::Syntax { line: 3, .. }));
        assert!(matches!(errs[6], TreeError::Syntax { .. }));
        assert!(matches!(errs[7], TreeError::Syntax { line: 2, .. }));
        assert_eq!(errs[8], TreeError::RootMismatch { declared: 1, actual: 0 });
        assert_eq!(errs[9], TreeError::ParentOutOfRange { vertex: 1, parent: -3, n: 2 });
    }
}
