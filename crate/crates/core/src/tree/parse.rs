use super::raw::Raw;
use super::TreeError;
use alloc::vec::Vec;

/// Parse `tree := '*' | '(' tree tree+ ')'`, with an optional `!` after a
/// closing parenthesis marking that subtree's edge non-metric when `marks`.
pub(crate) fn parse_raw(text: &str, marks: bool) -> Result<Raw, TreeError> {
    let bytes = text.trim().as_bytes();
    let mut p = Parser { bytes, pos: 0, marks };
    let t = p.tree(true)?;
    if p.pos != bytes.len() {
        return Err(TreeError::Syntax { pos: p.pos, msg: "trailing input" });
    }
    if t.is_leaf() {
        return Err(TreeError::TooFewLeaves);
    }
    Ok(t.canonical())
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    marks: bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn tree(&mut self, root: bool) -> Result<Raw, TreeError> {
        match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                if self.peek() == Some(b'!') {
                    return Err(TreeError::MarkerOnLeaf { pos: self.pos });
                }
                Ok(Raw::Leaf)
            }
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let mut kids = Vec::new();
                loop {
                    match self.peek() {
                        Some(b')') => break,
                        Some(b'*') | Some(b'(') => kids.push(self.tree(false)?),
                        None => return Err(TreeError::Syntax { pos: self.pos, msg: "unclosed '('" }),
                        Some(_) => {
                            return Err(TreeError::Syntax { pos: self.pos, msg: "expected '*', '(' or ')'" })
                        }
                    }
                }
                self.pos += 1;
                match kids.len() {
                    0 => return Err(TreeError::Syntax { pos: open, msg: "empty vertex" }),
                    1 => return Err(TreeError::UnaryVertex { pos: open }),
                    _ => {}
                }
                let mut metric = true;
                if self.peek() == Some(b'!') {
                    if !self.marks {
                        return Err(TreeError::UnexpectedMarker { pos: self.pos });
                    }
                    if root {
                        return Err(TreeError::MarkerOnRoot { pos: self.pos });
                    }
                    metric = false;
                    self.pos += 1;
                }
                Ok(Raw::Node { tag: 0, metric, kids })
            }
            None => Err(TreeError::Syntax { pos: self.pos, msg: "unexpected end of input" }),
            Some(_) => Err(TreeError::Syntax { pos: self.pos, msg: "expected '*' or '('" }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_raw("((**)*", false), Err(TreeError::Syntax { pos: 6, msg: "unclosed '('" }));
        assert_eq!(parse_raw("(*(*))", false), Err(TreeError::UnaryVertex { pos: 2 }));
        assert_eq!(parse_raw("(**)!", true), Err(TreeError::MarkerOnRoot { pos: 4 }));
        assert_eq!(parse_raw("(*!*)", true), Err(TreeError::MarkerOnLeaf { pos: 2 }));
        assert_eq!(parse_raw("((**)!*)", false), Err(TreeError::UnexpectedMarker { pos: 5 }));
        assert_eq!(parse_raw("*", false), Err(TreeError::TooFewLeaves));
        assert_eq!(parse_raw("()", false), Err(TreeError::Syntax { pos: 0, msg: "empty vertex" }));
        assert_eq!(parse_raw("(**)x", false), Err(TreeError::Syntax { pos: 4, msg: "trailing input" }));
    }

    #[test]
    fn marker_sets_flag() {
        let t = parse_raw("((**)!*)", true).unwrap();
        assert!(!t.kids()[0].metric());
        assert_eq!(t.render(true), "((**)!*)");
    }
}
