//! The `.dmod` problem file format.
//!
//! ```text
//! n = 2;                        # or: vars x, y;
//! M: rank 1;
//! x1*dx1 + 2*x2*dx2 - 5;
//! dx1^2 - dx2;
//! loc M: f = x1; exponents 7; rank 1;
//! <relations of the localized dual>;
//! betti: 1, 1, 0, 1, 1;
//! ```
//!
//! Relations of a rank r module are written `[a, b, ...]`, or as a bare
//! operator when r = 1.

use std::fmt;

use dmod::homology::Presentation;
use dmod::solutions::LocalizationData;
use dmod::text::{Cursor, Tok};
use dmod::weyl::{Ctx, FreeVector, Names, Weyl};
use dmod::{Error, Result};

const KEYWORDS: [&str; 7] = ["n", "vars", "loc", "betti", "rank", "f", "exponents"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module {
    pub name: String,
    pub presentation: Presentation,
}

/// Localization data attached to a named module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localization {
    pub module: String,
    pub f: Weyl,
    pub exponents: Vec<u32>,
    pub presentation: Presentation,
}

impl Localization {
    pub fn data(&self) -> LocalizationData {
        LocalizationData { f: self.f.clone(), presentation: self.presentation.clone(), exponents: self.exponents.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub ctx: Ctx,
    pub modules: Vec<Module>,
    pub localizations: Vec<Localization>,
    pub betti: Vec<Vec<u64>>,
}

impl ProblemFile {
    pub fn module(&self, name: &str) -> Option<&Module> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn localizations_of(&self, name: &str) -> Vec<LocalizationData> {
        self.localizations.iter().filter(|l| l.module == name).map(Localization::data).collect()
    }
}

pub fn parse(src: &str) -> Result<ProblemFile> {
    let mut c = Cursor::new(src);
    let ctx = header(&mut c)?;
    let mut file = ProblemFile { ctx: ctx.clone(), modules: Vec::new(), localizations: Vec::new(), betti: Vec::new() };
    while !c.at_end() {
        let (loc_line, loc_col) = c.location();
        match c.peek2() {
            (Tok::Ident(k), Tok::Sym(':')) if k == "betti" => {
                c.next_tok();
                c.next_tok();
                file.betti.push(betti(&mut c)?);
            }
            (Tok::Ident(k), Tok::Ident(_)) if k == "loc" => {
                c.next_tok();
                let module = c.expect_ident()?;
                c.expect_sym(':')?;
                if file.module(&module).is_none() {
                    return Err(Error::Parse { line: loc_line, col: loc_col, msg: format!("unknown module '{module}'") });
                }
                c.expect_keyword("f")?;
                c.expect_sym('=')?;
                let f = c.expr(&ctx)?;
                if !f.is_polynomial() {
                    return c.error("localizing element must be a polynomial");
                }
                c.expect_sym(';')?;
                c.expect_keyword("exponents")?;
                let mut exponents = Vec::new();
                loop {
                    let e = c.expect_int()?;
                    if e < 0 {
                        return c.error("exponents must be nonnegative");
                    }
                    exponents.push(e as u32);
                    if !c.eat_sym(',') {
                        break;
                    }
                }
                c.expect_sym(';')?;
                let rank = rank_decl(&mut c)?;
                if exponents.len() != rank {
                    return c.error(format!("{} exponents for rank {rank}", exponents.len()));
                }
                let relations = relations(&mut c, &ctx, rank)?;
                let presentation = Presentation::new(&ctx, rank, relations);
                file.localizations.push(Localization { module, f, exponents, presentation });
            }
            (Tok::Ident(name), Tok::Sym(':')) => {
                if KEYWORDS.contains(&name.as_str()) {
                    return c.error(format!("'{name}' is reserved"));
                }
                if file.module(&name).is_some() {
                    return c.error(format!("module '{name}' declared twice"));
                }
                c.next_tok();
                c.next_tok();
                let rank = rank_decl(&mut c)?;
                let relations = relations(&mut c, &ctx, rank)?;
                file.modules.push(Module { name, presentation: Presentation::new(&ctx, rank, relations) });
            }
            _ => return c.error("expected a module, 'loc' or 'betti' declaration"),
        }
    }
    Ok(file)
}

fn header(c: &mut Cursor) -> Result<Ctx> {
    match c.next_tok() {
        Tok::Ident(k) if k == "n" => {
            c.expect_sym('=')?;
            let n = c.expect_int()?;
            if n < 1 {
                return c.error("n must be positive");
            }
            c.expect_sym(';')?;
            Ok(Ctx::std(n as usize))
        }
        Tok::Ident(k) if k == "vars" => {
            let mut names: Vec<String> = Vec::new();
            loop {
                let v = c.expect_ident()?;
                if KEYWORDS.contains(&v.as_str()) {
                    return c.error(format!("'{v}' is reserved"));
                }
                if names.iter().any(|u| *u == v || format!("d{u}") == v || format!("d{v}") == *u) {
                    return c.error(format!("variable '{v}' clashes with an earlier name"));
                }
                names.push(v);
                if !c.eat_sym(',') {
                    break;
                }
            }
            c.expect_sym(';')?;
            Ok(Ctx::custom(&names))
        }
        _ => c.error("expected 'n = <count>;' or 'vars <names>;'"),
    }
}

fn rank_decl(c: &mut Cursor) -> Result<usize> {
    c.expect_keyword("rank")?;
    let r = c.expect_int()?;
    if r < 1 {
        return c.error("rank must be positive");
    }
    c.expect_sym(';')?;
    Ok(r as usize)
}

/// Relations up to the next declaration or the end of input.
fn relations(c: &mut Cursor, ctx: &Ctx, rank: usize) -> Result<Vec<FreeVector>> {
    let mut out = Vec::new();
    loop {
        match c.peek2() {
            (Tok::End, _) => break,
            (Tok::Ident(_), Tok::Sym(':')) => break,
            (Tok::Ident(k), Tok::Ident(_)) if k == "loc" => break,
            _ => {}
        }
        out.push(c.vector(ctx, rank)?);
        c.expect_sym(';')?;
    }
    Ok(out)
}

fn betti(c: &mut Cursor) -> Result<Vec<u64>> {
    let mut v = Vec::new();
    loop {
        let b = c.expect_int()?;
        if b < 0 {
            return c.error("Betti numbers are nonnegative");
        }
        v.push(b as u64);
        if !c.eat_sym(',') {
            break;
        }
    }
    c.expect_sym(';')?;
    Ok(v)
}

fn relation_text(v: &FreeVector) -> String {
    if v.rank() == 1 {
        v.entries[0].to_string()
    } else {
        v.to_string()
    }
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ctx.names() {
            Names::Custom(v) => writeln!(f, "vars {};", v.join(", "))?,
            _ => writeln!(f, "n = {};", self.ctx.n())?,
        }
        for m in &self.modules {
            writeln!(f, "{}: rank {};", m.name, m.presentation.rank)?;
            for r in &m.presentation.relations {
                writeln!(f, "{};", relation_text(r))?;
            }
        }
        for l in &self.localizations {
            let ex: Vec<String> = l.exponents.iter().map(|e| e.to_string()).collect();
            writeln!(f, "loc {}: f = {}; exponents {}; rank {};", l.module, l.f, ex.join(", "), l.presentation.rank)?;
            for r in &l.presentation.relations {
                writeln!(f, "{};", relation_text(r))?;
            }
        }
        for b in &self.betti {
            let s: Vec<String> = b.iter().map(|k| k.to_string()).collect();
            writeln!(f, "betti: {};", s.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dmod::text::w;

    #[test]
    fn gkz_one_liner() {
        let p = parse("n=2; M: rank 1; x1*dx1 + 2*x2*dx2 - 5; dx1^2 - dx2;").unwrap();
        let c = Ctx::std(2);
        let m = &p.modules[0];
        assert_eq!(m.name, "M");
        assert_eq!(m.presentation, Presentation::cyclic(&c, &[w(&c, "x1*dx1 + 2*x2*dx2 - 5"), w(&c, "dx1^2 - dx2")]));
    }

    #[test]
    fn normal_ordering() {
        let p = parse("n = 1; M: rank 1; dx1*x1;").unwrap();
        assert_eq!(p.modules[0].presentation.relations[0].entries[0].to_string(), "x1*dx1 + 1");
    }

    #[test]
    fn undeclared_variable() {
        let e = parse("n=2;\nM: rank 1;\n  x3;").unwrap_err();
        match e {
            Error::Parse { line, col, .. } => assert_eq!((line, col), (3, 5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rank_mismatch() {
        assert!(matches!(parse("n=1; M: rank 2; [dx1, 1, 0];"), Err(Error::Parse { .. })));
        assert!(matches!(parse("n=1; M: rank 2; dx1;"), Err(Error::Parse { .. })));
    }

    #[test]
    fn blocks() {
        let src = "vars x, y;\nA: rank 2;\n[dx, 0];\n[y, -1];\nloc A: f = x*y; exponents 3, 0; rank 2;\n[dx, dy];\nbetti: 1, 1, 0, 1, 1;\n";
        let p = parse(src).unwrap();
        assert_eq!(p.modules.len(), 1);
        assert_eq!(p.localizations[0].exponents, vec![3, 0]);
        assert_eq!(p.betti, vec![vec![1, 1, 0, 1, 1]]);
        assert_eq!(p.to_string(), src);
        assert_eq!(parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn misplaced_tokens() {
        assert!(parse("M: rank 1; dx1;").is_err());
        assert!(parse("n = 1; loc M: f = x1; exponents 1; rank 1; dx1;").is_err());
        assert!(parse("n = 1; M: rank 1; dx1; M: rank 1; x1;").is_err());
        assert!(parse("vars x, dx;").is_err());
    }
}
