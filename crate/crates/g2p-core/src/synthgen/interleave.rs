use std::collections::BTreeMap;

use crate::cfront::tokenize;
use crate::graphrep::{parse_loop, Ast, NodeKind};
use crate::rng::stable_hash;

use super::SynthError;

/// Exhaustive two-iteration interleaving check at trip count 2.
///
/// Runs the loop body concretely for iterations 0 and 1, once serially and
/// once for every interleaving of the two iterations' statements (statements
/// are atomic), starting each run from the same deterministic memory state.
/// Returns `true` when every interleaving reproduces the serial final state,
/// i.e. the loop behaves as parallelizable at this scale. Free variables and
/// array cells get large spread-out initial values so that distinct accesses
/// cannot alias through small constants.
pub fn interleave_check(loop_text: &str) -> Result<bool, SynthError> {
    let unsupported = |reason: &str| SynthError::OracleUnsupported {
        reason: reason.into(),
    };
    let tokens =
        tokenize(loop_text).map_err(|e| unsupported(&format!("loop does not tokenize: {e}")))?;
    let ast = parse_loop(&tokens).map_err(|e| unsupported(&format!("loop does not parse: {e}")))?;

    let root = &ast.nodes[ast.root];
    let init_clause = root.children[0];
    let update_clause = root.children[2];
    let body = root.children[3];

    let update_expr = ast.nodes[update_clause]
        .children
        .iter()
        .copied()
        .find(|&c| ast.kind(c) != NodeKind::OperatorLeaf)
        .ok_or_else(|| unsupported("empty update clause"))?;
    let counter = super::oracle::update_target_pub(&ast, update_expr)
        .ok_or_else(|| unsupported("cannot identify loop counter"))?;

    let stmts = flatten(&ast, body);
    if stmts.is_empty() {
        return Ok(true);
    }
    if stmts.len() > 6 {
        return Err(unsupported("body too large for exhaustive interleaving"));
    }

    // Counter values for iterations 0 and 1.
    let mut probe = Machine::new(&ast, &counter);
    probe.counter = init_value_for(&ast, init_clause, &counter, &mut probe)?;
    let c0 = probe.counter;
    probe.run_update(update_expr)?;
    let c1 = probe.counter;

    let serial: Schedule = (0..stmts.len())
        .map(|s| (0usize, s))
        .chain((0..stmts.len()).map(|s| (1usize, s)))
        .collect();
    let reference = execute(&ast, &counter, [c0, c1], &stmts, &serial)?;

    let mut schedules = Vec::new();
    enumerate_interleavings(stmts.len(), &mut Vec::new(), 0, 0, &mut schedules);
    for schedule in schedules {
        let state = execute(&ast, &counter, [c0, c1], &stmts, &schedule)?;
        if state != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

type Schedule = Vec<(usize, usize)>;

fn enumerate_interleavings(
    n: usize,
    prefix: &mut Schedule,
    taken_a: usize,
    taken_b: usize,
    out: &mut Vec<Schedule>,
) {
    if taken_a == n && taken_b == n {
        out.push(prefix.clone());
        return;
    }
    if taken_a < n {
        prefix.push((0, taken_a));
        enumerate_interleavings(n, prefix, taken_a + 1, taken_b, out);
        prefix.pop();
    }
    if taken_b < n {
        prefix.push((1, taken_b));
        enumerate_interleavings(n, prefix, taken_a, taken_b + 1, out);
        prefix.pop();
    }
}

fn flatten(ast: &Ast, body: usize) -> Vec<usize> {
    match ast.kind(body) {
        NodeKind::CompoundStmt => {
            let mut out = Vec::new();
            for &c in &ast.nodes[body].children {
                if ast.kind(c) == NodeKind::CompoundStmt {
                    out.extend(flatten(ast, c));
                } else {
                    out.push(c);
                }
            }
            out
        }
        _ => vec![body],
    }
}

fn init_value_for(
    ast: &Ast,
    init_clause: usize,
    counter: &str,
    machine: &mut Machine,
) -> Result<i64, SynthError> {
    let init_expr = ast.nodes[init_clause]
        .children
        .iter()
        .copied()
        .find(|&c| ast.kind(c) != NodeKind::OperatorLeaf);
    let Some(expr) = init_expr else {
        return Ok(0);
    };
    let mut stack = vec![expr];
    while let Some(id) = stack.pop() {
        let node = &ast.nodes[id];
        if node.kind == NodeKind::Assign
            && ast.nodes[node.children[0]].text == counter
            && ast.nodes[node.children[1]].text == "="
        {
            return machine.eval(node.children[2]);
        }
        stack.extend(node.children.iter().copied());
    }
    Ok(0)
}

/// Final memory state: shared scalars plus touched array cells.
type State = (BTreeMap<String, i64>, BTreeMap<(String, Vec<i64>), i64>);

fn execute(
    ast: &Ast,
    counter: &str,
    counter_values: [i64; 2],
    stmts: &[usize],
    schedule: &Schedule,
) -> Result<State, SynthError> {
    let mut machine = Machine::new(ast, counter);
    // Two private local environments, one per iteration.
    let mut iter_locals: [BTreeMap<String, i64>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for &(iter, stmt_idx) in schedule {
        machine.counter = counter_values[iter];
        std::mem::swap(&mut machine.locals, &mut iter_locals[iter]);
        machine.run_statement(stmts[stmt_idx])?;
        std::mem::swap(&mut machine.locals, &mut iter_locals[iter]);
    }
    Ok((machine.scalars, machine.arrays))
}

/// Initial value for an untouched cell: large and structureless so that
/// values differing by template-scale constants can never collide.
fn initial_scalar(name: &str) -> i64 {
    1_000_000 + (stable_hash(name) % 1_000_000_007) as i64
}

fn initial_element(name: &str, idx: &[i64]) -> i64 {
    let key = format!("{name}{idx:?}");
    1_000_000 + (stable_hash(&key) % 1_000_000_007) as i64
}

struct Machine<'a> {
    ast: &'a Ast,
    counter_name: String,
    counter: i64,
    scalars: BTreeMap<String, i64>,
    arrays: BTreeMap<(String, Vec<i64>), i64>,
    locals: BTreeMap<String, i64>,
}

impl<'a> Machine<'a> {
    fn new(ast: &'a Ast, counter: &str) -> Self {
        Machine {
            ast,
            counter_name: counter.to_string(),
            counter: 0,
            scalars: BTreeMap::new(),
            arrays: BTreeMap::new(),
            locals: BTreeMap::new(),
        }
    }

    fn unsupported<T>(&self, reason: &str) -> Result<T, SynthError> {
        Err(SynthError::OracleUnsupported {
            reason: reason.into(),
        })
    }

    fn read_scalar(&mut self, name: &str) -> i64 {
        if let Some(&v) = self.locals.get(name) {
            return v;
        }
        *self
            .scalars
            .entry(name.to_string())
            .or_insert_with(|| initial_scalar(name))
    }

    fn read_elem(&mut self, name: &str, idx: &[i64]) -> i64 {
        *self
            .arrays
            .entry((name.to_string(), idx.to_vec()))
            .or_insert_with(|| initial_element(name, idx))
    }

    fn run_update(&mut self, expr: usize) -> Result<(), SynthError> {
        // The counter is privatized; an update that writes anything else is
        // outside this checker's model. Reads may lazily materialize cells
        // at their initial values, which is not a write.
        let before_scalars = self.scalars.clone();
        let before_arrays = self.arrays.clone();
        self.eval(expr)?;
        let scalars_clean = self.scalars.iter().all(|(name, &v)| {
            before_scalars
                .get(name)
                .copied()
                .unwrap_or_else(|| initial_scalar(name))
                == v
        });
        let arrays_clean = self.arrays.iter().all(|((name, idx), &v)| {
            before_arrays
                .get(&(name.clone(), idx.clone()))
                .copied()
                .unwrap_or_else(|| initial_element(name, idx))
                == v
        });
        if !scalars_clean || !arrays_clean {
            return self.unsupported("update clause writes shared state");
        }
        Ok(())
    }

    fn run_statement(&mut self, stmt: usize) -> Result<(), SynthError> {
        let node = &self.ast.nodes[stmt];
        match node.kind {
            NodeKind::ExprStmt => {
                for &c in &node.children {
                    let kind = self.ast.kind(c);
                    if kind == NodeKind::OperatorLeaf {
                        if matches!(
                            self.ast.nodes[c].text.as_str(),
                            "break" | "continue" | "return"
                        ) {
                            return self.unsupported("jump statement");
                        }
                        continue;
                    }
                    self.eval(c)?;
                }
                Ok(())
            }
            NodeKind::DeclStmt => {
                for &c in &node.children {
                    match self.ast.kind(c) {
                        NodeKind::Identifier => {
                            let name = self.ast.nodes[c].text.clone();
                            self.locals.insert(name, 0);
                        }
                        NodeKind::Assign => {
                            let target = self.ast.nodes[c].children[0];
                            if self.ast.kind(target) != NodeKind::Identifier {
                                return self.unsupported("complex declarator");
                            }
                            let v = self.eval(self.ast.nodes[c].children[2])?;
                            self.locals.insert(self.ast.nodes[target].text.clone(), v);
                        }
                        NodeKind::OperatorLeaf => {}
                        _ => return self.unsupported("complex declarator"),
                    }
                }
                Ok(())
            }
            NodeKind::IfStmt => {
                let cond = self.eval(node.children[0])?;
                let taken = if cond != 0 {
                    Some(node.children[1])
                } else {
                    node.children.get(2).copied()
                };
                if let Some(branch) = taken {
                    for s in flatten(self.ast, branch) {
                        self.run_statement(s)?;
                    }
                }
                Ok(())
            }
            NodeKind::WhileStmt | NodeKind::ForStmt => self.unsupported("nested loop"),
            _ => self.unsupported("unrecognized statement"),
        }
    }

    fn eval(&mut self, expr: usize) -> Result<i64, SynthError> {
        let node = &self.ast.nodes[expr];
        match node.kind {
            NodeKind::Constant => {
                node.text
                    .parse::<i64>()
                    .map_err(|_| SynthError::OracleUnsupported {
                        reason: format!("non-integer constant {:?}", node.text),
                    })
            }
            NodeKind::Identifier => {
                let name = node.text.clone();
                if name == self.counter_name {
                    Ok(self.counter)
                } else {
                    Ok(self.read_scalar(&name))
                }
            }
            NodeKind::Subscript => {
                let (name, idx) = self.subscript_addr(expr)?;
                Ok(self.read_elem(&name, &idx))
            }
            NodeKind::Call => self.unsupported("function call"),
            NodeKind::Unop => {
                let (a, b) = (node.children[0], node.children[1]);
                let (op_id, operand) = if self.ast.kind(a) == NodeKind::OperatorLeaf {
                    (a, b)
                } else {
                    (b, a)
                };
                let op = self.ast.nodes[op_id].text.clone();
                match op.as_str() {
                    "-" => Ok(self.eval(operand)?.wrapping_neg()),
                    "+" => self.eval(operand),
                    "!" => Ok((self.eval(operand)? == 0) as i64),
                    "~" => Ok(!self.eval(operand)?),
                    "++" | "--" => {
                        let delta = if op == "++" { 1 } else { -1 };
                        let old = match self.ast.kind(operand) {
                            NodeKind::Identifier => {
                                let name = self.ast.nodes[operand].text.clone();
                                let old = if name == self.counter_name {
                                    self.counter
                                } else {
                                    self.read_scalar(&name)
                                };
                                self.store_scalar(&name, old.wrapping_add(delta));
                                old
                            }
                            NodeKind::Subscript => {
                                let (name, idx) = self.subscript_addr(operand)?;
                                let old = self.read_elem(&name, &idx);
                                self.arrays.insert((name, idx), old.wrapping_add(delta));
                                old
                            }
                            _ => return self.unsupported("increment of unsupported lvalue"),
                        };
                        Ok(old)
                    }
                    _ => self.unsupported("pointer operator"),
                }
            }
            NodeKind::Binop => {
                let op = self.ast.nodes[node.children[1]].text.clone();
                if matches!(op.as_str(), "." | "->") {
                    return self.unsupported("member access");
                }
                if op == "&&" {
                    let l = self.eval(node.children[0])?;
                    if l == 0 {
                        return Ok(0);
                    }
                    return Ok((self.eval(node.children[2])? != 0) as i64);
                }
                if op == "||" {
                    let l = self.eval(node.children[0])?;
                    if l != 0 {
                        return Ok(1);
                    }
                    return Ok((self.eval(node.children[2])? != 0) as i64);
                }
                let a = self.eval(node.children[0])?;
                let b = self.eval(node.children[2])?;
                Ok(apply(&op, a, b))
            }
            NodeKind::Assign => {
                let target = node.children[0];
                let op = self.ast.nodes[node.children[1]].text.clone();
                let value = if op == "=" {
                    self.eval(node.children[2])?
                } else {
                    let current = match self.ast.kind(target) {
                        NodeKind::Identifier => {
                            let name = self.ast.nodes[target].text.clone();
                            if name == self.counter_name {
                                self.counter
                            } else {
                                self.read_scalar(&name)
                            }
                        }
                        NodeKind::Subscript => {
                            let (name, idx) = self.subscript_addr(target)?;
                            self.read_elem(&name, &idx)
                        }
                        _ => return self.unsupported("compound assignment target"),
                    };
                    let rhs = self.eval(node.children[2])?;
                    apply(op.trim_end_matches('='), current, rhs)
                };
                match self.ast.kind(target) {
                    NodeKind::Identifier => {
                        let name = self.ast.nodes[target].text.clone();
                        self.store_scalar(&name, value);
                    }
                    NodeKind::Subscript => {
                        let (name, idx) = self.subscript_addr(target)?;
                        self.arrays.insert((name, idx), value);
                    }
                    _ => return self.unsupported("assignment target"),
                }
                Ok(value)
            }
            _ => self.unsupported("unsupported expression"),
        }
    }

    fn store_scalar(&mut self, name: &str, value: i64) {
        if name == self.counter_name {
            self.counter = value;
        } else if self.locals.contains_key(name) {
            self.locals.insert(name.to_string(), value);
        } else {
            self.scalars.insert(name.to_string(), value);
        }
    }

    fn subscript_addr(&mut self, expr: usize) -> Result<(String, Vec<i64>), SynthError> {
        let mut indices = Vec::new();
        let mut cur = expr;
        loop {
            let node = &self.ast.nodes[cur];
            match node.kind {
                NodeKind::Subscript => {
                    indices.push(self.eval(node.children[2])?);
                    cur = node.children[0];
                }
                NodeKind::Identifier => {
                    indices.reverse();
                    return Ok((node.text.clone(), indices));
                }
                _ => return self.unsupported("subscript base"),
            }
        }
    }
}

fn apply(op: &str, a: i64, b: i64) -> i64 {
    match op {
        "+" => a.wrapping_add(b),
        "-" => a.wrapping_sub(b),
        "*" => a.wrapping_mul(b),
        // Division by zero is modeled as zero; generated code never hits it.
        "/" => {
            if b == 0 || (a == i64::MIN && b == -1) {
                0
            } else {
                a / b
            }
        }
        "%" => {
            if b == 0 || (a == i64::MIN && b == -1) {
                0
            } else {
                a % b
            }
        }
        "<" => (a < b) as i64,
        ">" => (a > b) as i64,
        "<=" => (a <= b) as i64,
        ">=" => (a >= b) as i64,
        "==" => (a == b) as i64,
        "!=" => (a != b) as i64,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthgen::{dependence_oracle, DEFAULT_TRIP_BOUND};

    #[test]
    fn do_all_passes() {
        assert!(interleave_check("for(i=0;i<n;i++) a[i]=b[i]+1;").unwrap());
    }

    #[test]
    fn reduction_passes() {
        assert!(interleave_check("for(i=0;i<n;i+=step){v+=2; v=v+step;}").unwrap());
        assert!(interleave_check("for(i=0;i<n;i++) p *= a[i];").unwrap());
    }

    #[test]
    fn recurrence_fails() {
        assert!(!interleave_check("for(i=1;i<n;i++) a[i]=a[i-1]+1;").unwrap());
    }

    #[test]
    fn raw_chain_fails() {
        assert!(!interleave_check("for(i=0;i<n;i++){ t = a[i] + 2; b[i] = t + 1; }").unwrap());
    }

    #[test]
    fn agreement_with_oracle_on_hand_cases() {
        let cases = [
            "for(i=0;i<n;i++) a[i]=b[i]+1;",
            "for(i=0;i<n;i+=step){v+=2; v=v+step;}",
            "for(i=1;i<n;i++) a[i]=a[i-1]+1;",
            "for(i=0;i<n;i++) a[i] = a[i + 1] - 3;",
            "for(i=0;i<n;i++){ s = s + a[i]; b[i] = s; }",
            "for(i=0;i<n;i++){ s = s + a[i]; s = s * 2; }",
            "for(i=0;i<n;i++) { a[i] = a[0] + 7; }",
            "for(i=0;i<n;i++){ int t = b[i]; a[i] = t * t; }",
        ];
        for src in cases {
            let verdict = dependence_oracle(src, DEFAULT_TRIP_BOUND).unwrap();
            let agrees = interleave_check(src).unwrap();
            assert_eq!(
                agrees, verdict.parallel,
                "oracle and interleaving disagree on {src:?}"
            );
        }
    }
}
