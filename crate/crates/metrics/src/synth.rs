//! Seeded generator of random, well-formed Java methods for property tests
//! over the metric catalog.

use rand::Rng;

/// Source of a class `Gen` holding one generated method `m`.
pub fn random_class<R: Rng>(rng: &mut R, max_depth: u32) -> String {
    format!("class Gen {{\n{}\n}}\n", random_method(rng, max_depth))
}

/// A method over locals `a`, `b`, `k`, `p`, `q` whose body nests control
/// statements up to `max_depth` levels.
pub fn random_method<R: Rng>(rng: &mut R, max_depth: u32) -> String {
    let mut g = Gen { rng, out: String::new() };
    g.out.push_str("int m(int a, int b, int k, boolean p, boolean q) {\n");
    let n = g.rng.gen_range(1..=5);
    for _ in 0..n {
        g.stmt(max_depth, false, 1);
    }
    g.out.push_str("  return a;\n}\n");
    g.out
}

struct Gen<'r, R> {
    rng: &'r mut R,
    out: String,
}

impl<R: Rng> Gen<'_, R> {
    fn indent(&mut self, level: usize) {
        self.out.push_str(&"  ".repeat(level));
    }

    fn atom(&mut self) -> String {
        match self.rng.gen_range(0..5) {
            0 => "a > 0".into(),
            1 => "b < k".into(),
            2 => "p".into(),
            3 => "!q".into(),
            _ => "a != b".into(),
        }
    }

    fn cond(&mut self) -> String {
        let mut c = self.atom();
        while self.rng.gen_bool(0.35) {
            let op = if self.rng.gen_bool(0.5) { "&&" } else { "||" };
            c = format!("{c} {op} {}", self.atom());
        }
        c
    }

    fn simple(&mut self, level: usize) {
        self.indent(level);
        match self.rng.gen_range(0..4) {
            0 => self.out.push_str("a = a + 1;\n"),
            1 => self.out.push_str("f(b);\n"),
            2 => {
                let c = self.cond();
                self.out.push_str(&format!("b = {c} ? a : k;\n"));
            }
            _ => self.out.push_str("int t = a * b;\n"),
        }
    }

    fn block(&mut self, depth: u32, in_loop: bool, level: usize) {
        let n = self.rng.gen_range(0..=3);
        for _ in 0..n {
            self.stmt(depth, in_loop, level);
        }
    }

    fn stmt(&mut self, depth: u32, in_loop: bool, level: usize) {
        let choice = if depth == 0 { 0 } else { self.rng.gen_range(0..9) };
        match choice {
            1 => {
                let c = self.cond();
                self.indent(level);
                self.out.push_str(&format!("if ({c}) {{\n"));
                self.block(depth - 1, in_loop, level + 1);
                self.indent(level);
                if self.rng.gen_bool(0.4) {
                    self.out.push_str("} else {\n");
                    self.block(depth - 1, in_loop, level + 1);
                    self.indent(level);
                }
                self.out.push_str("}\n");
            }
            2 => {
                let c = self.cond();
                self.indent(level);
                self.out.push_str(&format!("while ({c}) {{\n"));
                self.block(depth - 1, true, level + 1);
                self.indent(level + 1);
                self.out.push_str("a--;\n");
                self.indent(level);
                self.out.push_str("}\n");
            }
            3 => {
                self.indent(level);
                self.out.push_str("for (int i = 0; i < k; i++) {\n");
                self.block(depth - 1, true, level + 1);
                self.indent(level);
                self.out.push_str("}\n");
            }
            4 => {
                self.indent(level);
                self.out.push_str("do {\n");
                self.block(depth - 1, true, level + 1);
                let c = self.cond();
                self.indent(level);
                self.out.push_str(&format!("}} while ({c});\n"));
            }
            5 => {
                self.indent(level);
                self.out.push_str("switch (k) {\n");
                let cases = self.rng.gen_range(1..=4);
                for label in 0..cases {
                    self.indent(level + 1);
                    self.out.push_str(&format!("case {label}:\n"));
                    self.block(depth - 1, in_loop, level + 2);
                    if self.rng.gen_bool(0.7) {
                        self.indent(level + 2);
                        self.out.push_str("break;\n");
                    }
                }
                if self.rng.gen_bool(0.5) {
                    self.indent(level + 1);
                    self.out.push_str("default:\n");
                    self.block(depth - 1, in_loop, level + 2);
                }
                self.indent(level);
                self.out.push_str("}\n");
            }
            6 => {
                self.indent(level);
                self.out.push_str("try {\n");
                self.block(depth - 1, in_loop, level + 1);
                let catches = self.rng.gen_range(1..=2);
                for i in 0..catches {
                    self.indent(level);
                    self.out.push_str(&format!("}} catch (E{i} e{i}) {{\n"));
                    self.block(depth - 1, in_loop, level + 1);
                }
                self.indent(level);
                if self.rng.gen_bool(0.3) {
                    self.out.push_str("} finally {\n");
                    self.block(depth - 1, in_loop, level + 1);
                    self.indent(level);
                }
                self.out.push_str("}\n");
            }
            7 if in_loop => {
                let c = self.cond();
                self.indent(level);
                let jump = if self.rng.gen_bool(0.5) { "break" } else { "continue" };
                self.out.push_str(&format!("if ({c}) {jump};\n"));
            }
            8 => {
                let c = self.cond();
                self.indent(level);
                self.out.push_str(&format!("if ({c}) return b;\n"));
            }
            _ => self.simple(level),
        }
    }
}
