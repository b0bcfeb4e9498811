use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::cfront::tokenize;
use crate::graphrep::{parse_loop, Ast, NodeKind};

use super::SynthError;

pub const DEFAULT_TRIP_BOUND: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictPattern {
    DoAll,
    Reduction,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub iter_a: usize,
    pub iter_b: usize,
    pub variable: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub parallel: bool,
    pub pattern: VerdictPattern,
    pub witness: Option<Witness>,
}

/// Decide parallelizability of a restricted loop by simulating
/// `trip_bound` iterations and tracing every scalar and array-element
/// access. The loop bound itself is ignored: the verdict describes the loop
/// body under generic trip counts, which is the soundness assumption the
/// synthetic corpus is built on.
///
/// Parallel when no pair of distinct iterations conflicts (write-write or
/// read-write on the same address), or when every conflict is confined to
/// scalars updated exclusively through one associative-commutative operator
/// (`+` or `*`), in which case the pattern is a reduction. Otherwise the
/// first conflicting pair is returned as a witness.
pub fn dependence_oracle(loop_text: &str, trip_bound: usize) -> Result<OracleVerdict, SynthError> {
    assert!(trip_bound >= 2, "trip_bound must be at least 2");
    let unsupported = |reason: &str| SynthError::OracleUnsupported {
        reason: reason.into(),
    };

    let tokens =
        tokenize(loop_text).map_err(|e| unsupported(&format!("loop does not tokenize: {e}")))?;
    let ast = parse_loop(&tokens).map_err(|e| unsupported(&format!("loop does not parse: {e}")))?;

    let shape = LoopShape::from_ast(&ast)?;
    let mut exec = Trace {
        ast: &ast,
        counter: shape.counter.clone(),
        counter_value: shape.initial_counter(&ast)?,
        scalars: HashMap::new(),
        locals: HashMap::new(),
        accesses: Vec::new(),
        iter: 0,
    };

    for iter in 0..trip_bound {
        exec.iter = iter;
        exec.locals.clear();
        for &stmt in &shape.body_stmts {
            exec.run_statement(stmt)?;
        }
        exec.run_update(shape.update_expr)?;
    }

    let conflicts = find_conflicts(&exec.accesses);
    if conflicts.is_empty() {
        return Ok(OracleVerdict {
            parallel: true,
            pattern: VerdictPattern::DoAll,
            witness: None,
        });
    }

    // A conflict is excusable only on a scalar that the loop updates through
    // a single associative-commutative operator and never reads elsewhere.
    let reduction_vars = reduction_scalars(&ast, &shape);
    let mut offending: Option<&Conflict> = None;
    for c in &conflicts {
        let excused = match &c.addr {
            Addr::Scalar(name) => reduction_vars.contains(name),
            Addr::Elem(..) => false,
        };
        if !excused {
            offending = Some(c);
            break;
        }
    }

    match offending {
        None => Ok(OracleVerdict {
            parallel: true,
            pattern: VerdictPattern::Reduction,
            witness: None,
        }),
        Some(c) => Ok(OracleVerdict {
            parallel: false,
            pattern: VerdictPattern::None,
            witness: Some(Witness {
                iter_a: c.iter_a,
                iter_b: c.iter_b,
                variable: c.addr.display(),
            }),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Addr {
    Scalar(String),
    Elem(String, Vec<i64>),
}

impl Addr {
    fn display(&self) -> String {
        match self {
            Addr::Scalar(name) => name.clone(),
            Addr::Elem(name, idx) => {
                let parts: Vec<String> = idx.iter().map(|i| format!("[{i}]")).collect();
                format!("{name}{}", parts.join(""))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Val {
    Int(i64),
    Sym,
}

impl Val {
    fn as_int(self) -> Option<i64> {
        match self {
            Val::Int(v) => Some(v),
            Val::Sym => None,
        }
    }
}

struct Access {
    addr: Addr,
    iter: usize,
    write: bool,
}

struct Conflict {
    addr: Addr,
    iter_a: usize,
    iter_b: usize,
}

/// Earliest conflicting iteration pair per address, in first-touch order.
fn find_conflicts(accesses: &[Access]) -> Vec<Conflict> {
    let mut order: Vec<&Addr> = Vec::new();
    let mut events: HashMap<&Addr, Vec<(usize, bool)>> = HashMap::new();
    for a in accesses {
        let slot = events.entry(&a.addr).or_default();
        if slot.is_empty() {
            order.push(&a.addr);
        }
        slot.push((a.iter, a.write));
    }

    let mut out = Vec::new();
    for addr in order {
        let evs = &events[addr];
        let mut best: Option<(usize, usize)> = None;
        for (i, &(it_a, w_a)) in evs.iter().enumerate() {
            for &(it_b, w_b) in &evs[i + 1..] {
                if it_a != it_b && (w_a || w_b) {
                    let pair = (it_a.min(it_b), it_a.max(it_b));
                    if best.is_none() || pair < best.unwrap() {
                        best = Some(pair);
                    }
                }
            }
        }
        if let Some((a, b)) = best {
            out.push(Conflict {
                addr: addr.clone(),
                iter_a: a,
                iter_b: b,
            });
        }
    }
    out
}

/// Structural view of the for-statement: counter, update expression, and
/// flattened body statements.
struct LoopShape {
    counter: String,
    update_expr: usize,
    body_stmts: Vec<usize>,
    init_expr: Option<usize>,
}

impl LoopShape {
    fn from_ast(ast: &Ast) -> Result<LoopShape, SynthError> {
        let unsupported = |reason: &str| SynthError::OracleUnsupported {
            reason: reason.into(),
        };
        let root = &ast.nodes[ast.root];
        if root.kind != NodeKind::ForStmt {
            return Err(unsupported("not a for-statement"));
        }
        let init_clause = root.children[0];
        let update_clause = root.children[2];
        let body = root.children[3];

        let update_expr = ast.nodes[update_clause]
            .children
            .iter()
            .copied()
            .find(|&c| ast.kind(c) != NodeKind::OperatorLeaf)
            .ok_or_else(|| unsupported("empty update clause: no induction structure"))?;
        let counter = update_target(ast, update_expr)
            .ok_or_else(|| unsupported("cannot identify loop counter in update"))?;

        let init_expr = ast.nodes[init_clause]
            .children
            .iter()
            .copied()
            .find(|&c| ast.kind(c) != NodeKind::OperatorLeaf);

        Ok(LoopShape {
            counter,
            update_expr,
            body_stmts: flatten_body(ast, body),
            init_expr,
        })
    }

    /// Counter value before iteration 0, from the init clause when it
    /// assigns the counter a concrete constant; otherwise symbolic.
    fn initial_counter(&self, ast: &Ast) -> Result<Val, SynthError> {
        let Some(init) = self.init_expr else {
            return Ok(Val::Sym);
        };
        // Accept `i = expr`, `int i = expr`, or comma lists containing one.
        let mut stack = vec![init];
        while let Some(id) = stack.pop() {
            let node = &ast.nodes[id];
            if node.kind == NodeKind::Assign
                && ast.nodes[node.children[0]].text == self.counter
                && ast.nodes[node.children[1]].text == "="
            {
                return Ok(const_eval(ast, node.children[2]));
            }
            for &c in &node.children {
                stack.push(c);
            }
        }
        Ok(Val::Sym)
    }
}

/// The scalar written by the update expression: `i++`, `i--`, `i += e`,
/// `i = e` all target `i`.
pub(super) fn update_target_pub(ast: &Ast, expr: usize) -> Option<String> {
    update_target(ast, expr)
}

fn update_target(ast: &Ast, expr: usize) -> Option<String> {
    let node = &ast.nodes[expr];
    match node.kind {
        NodeKind::Unop => {
            let (a, b) = (node.children[0], node.children[1]);
            for (id, other) in [(a, b), (b, a)] {
                if ast.kind(id) == NodeKind::Identifier
                    && matches!(ast.nodes[other].text.as_str(), "++" | "--")
                {
                    return Some(ast.nodes[id].text.clone());
                }
            }
            None
        }
        NodeKind::Assign => {
            let target = node.children[0];
            (ast.kind(target) == NodeKind::Identifier).then(|| ast.nodes[target].text.clone())
        }
        NodeKind::Binop if ast.nodes[node.children[1]].text == "," => {
            update_target(ast, node.children[0])
        }
        _ => None,
    }
}

fn flatten_body(ast: &Ast, body: usize) -> Vec<usize> {
    match ast.kind(body) {
        NodeKind::CompoundStmt => {
            let mut out = Vec::new();
            for &c in &ast.nodes[body].children {
                if ast.kind(c) == NodeKind::CompoundStmt {
                    out.extend(flatten_body(ast, c));
                } else {
                    out.push(c);
                }
            }
            out
        }
        _ => vec![body],
    }
}

/// Constant folding for init expressions: constants and unary minus only.
fn const_eval(ast: &Ast, expr: usize) -> Val {
    let node = &ast.nodes[expr];
    match node.kind {
        NodeKind::Constant => node.text.parse::<i64>().map_or(Val::Sym, Val::Int),
        NodeKind::Unop if ast.nodes[node.children[0]].text == "-" => {
            match const_eval(ast, node.children[1]) {
                Val::Int(v) => Val::Int(-v),
                Val::Sym => Val::Sym,
            }
        }
        _ => Val::Sym,
    }
}

struct Trace<'a> {
    ast: &'a Ast,
    counter: String,
    counter_value: Val,
    /// Shared scalar values, persisting across iterations.
    scalars: HashMap<String, Val>,
    /// Body-declared scalars: private, reset each iteration.
    locals: HashMap<String, Val>,
    accesses: Vec<Access>,
    iter: usize,
}

type ExecResult<T> = Result<T, SynthError>;

impl Trace<'_> {
    fn unsupported<T>(&self, reason: &str) -> ExecResult<T> {
        Err(SynthError::OracleUnsupported {
            reason: reason.into(),
        })
    }

    fn run_statement(&mut self, stmt: usize) -> ExecResult<()> {
        let node = &self.ast.nodes[stmt];
        match node.kind {
            NodeKind::ExprStmt => {
                for &c in &node.children {
                    let kind = self.ast.kind(c);
                    if kind == NodeKind::OperatorLeaf {
                        let text = &self.ast.nodes[c].text;
                        if matches!(text.as_str(), "break" | "continue" | "return") {
                            return self.unsupported("jump statement in body");
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
                            self.locals.insert(self.ast.nodes[c].text.clone(), Val::Sym);
                        }
                        NodeKind::Assign => {
                            let target = self.ast.nodes[c].children[0];
                            if self.ast.kind(target) != NodeKind::Identifier {
                                return self.unsupported("array declaration in body");
                            }
                            let value = self.eval(self.ast.nodes[c].children[2])?;
                            self.locals
                                .insert(self.ast.nodes[target].text.clone(), value);
                        }
                        NodeKind::OperatorLeaf => {}
                        _ => return self.unsupported("complex declarator in body"),
                    }
                }
                Ok(())
            }
            NodeKind::IfStmt => {
                let cond = self.eval(node.children[0])?;
                let Some(v) = cond.as_int() else {
                    return self.unsupported("branch condition is not concrete");
                };
                let taken = if v != 0 {
                    Some(node.children[1])
                } else {
                    node.children.get(2).copied()
                };
                if let Some(branch) = taken {
                    for s in flatten_body(self.ast, branch) {
                        self.run_statement(s)?;
                    }
                }
                Ok(())
            }
            NodeKind::WhileStmt => self.unsupported("while loop inside body"),
            NodeKind::ForStmt => self.unsupported("nested for loop"),
            _ => self.unsupported("unrecognized statement form"),
        }
    }

    /// Execute the update expression. Writes to the counter are private and
    /// untraced; anything else it touches is traced like body code.
    fn run_update(&mut self, expr: usize) -> ExecResult<()> {
        self.eval(expr)?;
        Ok(())
    }

    fn read(&mut self, addr: Addr) -> Val {
        self.accesses.push(Access {
            addr: addr.clone(),
            iter: self.iter,
            write: false,
        });
        match addr {
            Addr::Scalar(name) => *self.scalars.entry(name).or_insert(Val::Sym),
            Addr::Elem(..) => Val::Sym,
        }
    }

    fn write(&mut self, addr: Addr, value: Val) {
        self.accesses.push(Access {
            addr: addr.clone(),
            iter: self.iter,
            write: true,
        });
        if let Addr::Scalar(name) = addr {
            self.scalars.insert(name, value);
        }
    }

    fn eval(&mut self, expr: usize) -> ExecResult<Val> {
        let node = &self.ast.nodes[expr];
        match node.kind {
            NodeKind::Constant => Ok(node.text.parse::<i64>().map_or(Val::Sym, Val::Int)),
            NodeKind::Identifier => {
                let name = node.text.clone();
                if name == self.counter {
                    return Ok(self.counter_value);
                }
                if let Some(v) = self.locals.get(&name) {
                    return Ok(*v);
                }
                Ok(self.read(Addr::Scalar(name)))
            }
            NodeKind::Subscript => {
                let addr = self.subscript_addr(expr)?;
                Ok(self.read(addr))
            }
            NodeKind::Call => self.unsupported("function call"),
            NodeKind::Unop => self.eval_unop(expr),
            NodeKind::Binop => self.eval_binop(expr),
            NodeKind::Assign => self.eval_assign(expr),
            _ => self.unsupported("unsupported expression form"),
        }
    }

    fn eval_unop(&mut self, expr: usize) -> ExecResult<Val> {
        let node = &self.ast.nodes[expr];
        let (a, b) = (node.children[0], node.children[1]);
        let (op_id, operand) = if self.ast.kind(a) == NodeKind::OperatorLeaf {
            (a, b)
        } else {
            (b, a)
        };
        let op = self.ast.nodes[op_id].text.clone();
        match op.as_str() {
            "-" => Ok(match self.eval(operand)? {
                Val::Int(v) => Val::Int(v.wrapping_neg()),
                Val::Sym => Val::Sym,
            }),
            "+" => self.eval(operand),
            "!" => Ok(match self.eval(operand)? {
                Val::Int(v) => Val::Int((v == 0) as i64),
                Val::Sym => Val::Sym,
            }),
            "~" => Ok(match self.eval(operand)? {
                Val::Int(v) => Val::Int(!v),
                Val::Sym => Val::Sym,
            }),
            "++" | "--" => {
                let delta = if op == "++" { 1 } else { -1 };
                self.increment_target(operand, delta)
            }
            "*" | "&" => self.unsupported("pointer operator"),
            _ => self.unsupported("unsupported unary operator"),
        }
    }

    fn increment_target(&mut self, target: usize, delta: i64) -> ExecResult<Val> {
        match self.ast.kind(target) {
            NodeKind::Identifier => {
                let name = self.ast.nodes[target].text.clone();
                if name == self.counter {
                    let old = self.counter_value;
                    self.counter_value = match old {
                        Val::Int(v) => Val::Int(v.wrapping_add(delta)),
                        Val::Sym => Val::Sym,
                    };
                    return Ok(old);
                }
                if let Some(&old) = self.locals.get(&name) {
                    let new = match old {
                        Val::Int(v) => Val::Int(v.wrapping_add(delta)),
                        Val::Sym => Val::Sym,
                    };
                    self.locals.insert(name, new);
                    return Ok(old);
                }
                let old = self.read(Addr::Scalar(name.clone()));
                let new = match old {
                    Val::Int(v) => Val::Int(v.wrapping_add(delta)),
                    Val::Sym => Val::Sym,
                };
                self.write(Addr::Scalar(name), new);
                Ok(old)
            }
            NodeKind::Subscript => {
                let addr = self.subscript_addr(target)?;
                self.read(addr.clone());
                self.write(addr, Val::Sym);
                Ok(Val::Sym)
            }
            _ => self.unsupported("increment of unsupported lvalue"),
        }
    }

    fn eval_binop(&mut self, expr: usize) -> ExecResult<Val> {
        let node = &self.ast.nodes[expr];
        let op = self.ast.nodes[node.children[1]].text.clone();
        if matches!(op.as_str(), "." | "->") {
            return self.unsupported("member access");
        }
        let lhs = self.eval(node.children[0])?;
        // Short-circuit forms still evaluate both sides for tracing when the
        // left side is symbolic; a decided left side skips the right.
        if op == "&&" {
            if let Some(v) = lhs.as_int() {
                if v == 0 {
                    return Ok(Val::Int(0));
                }
                let rhs = self.eval(node.children[2])?;
                return Ok(match rhs {
                    Val::Int(r) => Val::Int((r != 0) as i64),
                    Val::Sym => Val::Sym,
                });
            }
            self.eval(node.children[2])?;
            return Ok(Val::Sym);
        }
        if op == "||" {
            if let Some(v) = lhs.as_int() {
                if v != 0 {
                    return Ok(Val::Int(1));
                }
                let rhs = self.eval(node.children[2])?;
                return Ok(match rhs {
                    Val::Int(r) => Val::Int((r != 0) as i64),
                    Val::Sym => Val::Sym,
                });
            }
            self.eval(node.children[2])?;
            return Ok(Val::Sym);
        }
        let rhs = self.eval(node.children[2])?;
        Ok(apply_binop(&op, lhs, rhs))
    }

    fn eval_assign(&mut self, expr: usize) -> ExecResult<Val> {
        let node = &self.ast.nodes[expr];
        let target = node.children[0];
        let op = self.ast.nodes[node.children[1]].text.clone();

        let value = if op == "=" {
            self.eval(node.children[2])?
        } else {
            // Compound assignment reads the target first.
            let current = match self.ast.kind(target) {
                NodeKind::Identifier => {
                    let name = self.ast.nodes[target].text.clone();
                    if name == self.counter {
                        self.counter_value
                    } else if let Some(&v) = self.locals.get(&name) {
                        v
                    } else {
                        self.read(Addr::Scalar(name))
                    }
                }
                NodeKind::Subscript => {
                    let addr = self.subscript_addr(target)?;
                    self.read(addr)
                }
                _ => return self.unsupported("compound assignment to unsupported lvalue"),
            };
            let rhs = self.eval(node.children[2])?;
            let base_op = op.trim_end_matches('=');
            apply_binop(base_op, current, rhs)
        };

        match self.ast.kind(target) {
            NodeKind::Identifier => {
                let name = self.ast.nodes[target].text.clone();
                if name == self.counter {
                    self.counter_value = value;
                } else if let Some(local) = self.locals.get_mut(&name) {
                    *local = value;
                } else {
                    self.write(Addr::Scalar(name), value);
                }
            }
            NodeKind::Subscript => {
                let addr = self.subscript_addr(target)?;
                self.write(addr, value);
            }
            _ => return self.unsupported("assignment to unsupported lvalue"),
        }
        Ok(value)
    }

    /// Resolve `name[e0][e1]...` to a concrete element address. Indices are
    /// traced as reads; a symbolic index is unsupported.
    fn subscript_addr(&mut self, expr: usize) -> ExecResult<Addr> {
        let mut indices = Vec::new();
        let mut cur = expr;
        loop {
            let node = &self.ast.nodes[cur];
            match node.kind {
                NodeKind::Subscript => {
                    let index_expr = node.children[2];
                    let v = self.eval(index_expr)?;
                    match v.as_int() {
                        Some(i) => indices.push(i),
                        None => {
                            return self.unsupported(
                                "array subscript does not evaluate to a concrete value",
                            )
                        }
                    }
                    cur = node.children[0];
                }
                NodeKind::Identifier => {
                    indices.reverse();
                    return Ok(Addr::Elem(node.text.clone(), indices));
                }
                _ => return self.unsupported("subscript base is not an identifier"),
            }
        }
    }
}

fn apply_binop(op: &str, lhs: Val, rhs: Val) -> Val {
    let (Some(a), Some(b)) = (lhs.as_int(), rhs.as_int()) else {
        return Val::Sym;
    };
    // Wrapping 64-bit semantics keep + and * exactly associative and
    // commutative, which the reduction classification relies on.
    match op {
        "+" => Val::Int(a.wrapping_add(b)),
        "-" => Val::Int(a.wrapping_sub(b)),
        "*" => Val::Int(a.wrapping_mul(b)),
        "/" => {
            if b == 0 || (a == i64::MIN && b == -1) {
                Val::Sym
            } else {
                Val::Int(a / b)
            }
        }
        "%" => {
            if b == 0 || (a == i64::MIN && b == -1) {
                Val::Sym
            } else {
                Val::Int(a % b)
            }
        }
        "<" => Val::Int((a < b) as i64),
        ">" => Val::Int((a > b) as i64),
        "<=" => Val::Int((a <= b) as i64),
        ">=" => Val::Int((a >= b) as i64),
        "==" => Val::Int((a == b) as i64),
        "!=" => Val::Int((a != b) as i64),
        _ => Val::Sym,
    }
}

/// Scalars whose every write in the loop (condition, update and body; the
/// init clause runs once and is exempt) is `x = x op e` / `x op= e` with one
/// operator from {+, *} and `x` absent from `e`, and which are never read
/// anywhere else.
fn reduction_scalars(ast: &Ast, shape: &LoopShape) -> HashSet<String> {
    let root = &ast.nodes[ast.root];
    let mut scope = vec![root.children[1], root.children[2], root.children[3]];
    scope.retain(|&id| !ast.nodes[id].children.is_empty());

    // All candidate names: scalars assigned anywhere in scope.
    let mut candidates: HashSet<String> = HashSet::new();
    for &region in &scope {
        collect_assigned_scalars(ast, region, &mut candidates);
    }
    candidates.remove(&shape.counter);

    candidates
        .into_iter()
        .filter(|name| {
            let mut ops: HashSet<&str> = HashSet::new();
            let mut ok = true;
            let mut allowed_reads: Vec<usize> = Vec::new();
            let mut writes: Vec<usize> = Vec::new();
            for &region in &scope {
                classify_occurrences(
                    ast,
                    region,
                    name,
                    &mut ops,
                    &mut ok,
                    &mut allowed_reads,
                    &mut writes,
                );
            }
            if !ok || writes.is_empty() || ops.len() != 1 {
                return false;
            }
            // Any occurrence not accounted for as a reduction write or its
            // paired self-read disqualifies the scalar.
            let accounted: HashSet<usize> =
                writes.iter().chain(allowed_reads.iter()).copied().collect();
            let mut total = Vec::new();
            for &region in &scope {
                collect_name_occurrences(ast, region, name, &mut total);
            }
            total.iter().all(|id| accounted.contains(id))
        })
        .collect()
}

fn collect_assigned_scalars(ast: &Ast, root: usize, out: &mut HashSet<String>) {
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        let node = &ast.nodes[id];
        if node.kind == NodeKind::Assign && ast.kind(node.children[0]) == NodeKind::Identifier {
            out.insert(ast.nodes[node.children[0]].text.clone());
        }
        if node.kind == NodeKind::Unop {
            for &c in &node.children {
                if ast.kind(c) == NodeKind::Identifier
                    && node
                        .children
                        .iter()
                        .any(|&o| matches!(ast.nodes[o].text.as_str(), "++" | "--"))
                {
                    out.insert(ast.nodes[c].text.clone());
                }
            }
        }
        stack.extend(node.children.iter().copied());
    }
}

fn collect_name_occurrences(ast: &Ast, root: usize, name: &str, out: &mut Vec<usize>) {
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        let node = &ast.nodes[id];
        if node.kind == NodeKind::Identifier && node.text == name {
            out.push(id);
        }
        stack.extend(node.children.iter().copied());
    }
}

#[allow(clippy::too_many_arguments)]
fn classify_occurrences(
    ast: &Ast,
    root: usize,
    name: &str,
    ops: &mut HashSet<&'static str>,
    ok: &mut bool,
    allowed_reads: &mut Vec<usize>,
    writes: &mut Vec<usize>,
) {
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        let node = &ast.nodes[id];
        match node.kind {
            NodeKind::Assign
                if ast.kind(node.children[0]) == NodeKind::Identifier
                    && ast.nodes[node.children[0]].text == name =>
            {
                let op_text = ast.nodes[node.children[1]].text.clone();
                let rhs = node.children[2];
                match op_text.as_str() {
                    "+=" | "*=" => {
                        let op: &'static str = if op_text == "+=" { "+" } else { "*" };
                        if name_occurs(ast, rhs, name) {
                            *ok = false;
                        }
                        ops.insert(op);
                        writes.push(node.children[0]);
                        stack.push(rhs);
                    }
                    "=" => {
                        // x = x op e  or  x = e op x, possibly parenthesized.
                        match reduction_rhs(ast, rhs, name) {
                            Some((op, self_read, e)) => {
                                ops.insert(op);
                                writes.push(node.children[0]);
                                allowed_reads.push(self_read);
                                if name_occurs(ast, e, name) {
                                    *ok = false;
                                }
                                stack.push(e);
                            }
                            None => {
                                *ok = false;
                                stack.push(rhs);
                            }
                        }
                    }
                    _ => {
                        // -=, /=: not associative-commutative.
                        *ok = false;
                        stack.push(rhs);
                    }
                }
            }
            NodeKind::Unop => {
                // `x++` is an additive reduction update; `x--` subtracts and
                // is not excused.
                let ident =
                    node.children.iter().copied().find(|&c| {
                        ast.kind(c) == NodeKind::Identifier && ast.nodes[c].text == name
                    });
                let op_leaf = node
                    .children
                    .iter()
                    .copied()
                    .find(|&c| matches!(ast.nodes[c].text.as_str(), "++" | "--"));
                match (ident, op_leaf) {
                    (Some(ident), Some(op_leaf)) => {
                        if ast.nodes[op_leaf].text == "++" {
                            ops.insert("+");
                            writes.push(ident);
                        } else {
                            *ok = false;
                        }
                    }
                    _ => stack.extend(node.children.iter().copied()),
                }
            }
            _ => {
                stack.extend(node.children.iter().copied());
            }
        }
    }
}

/// Matches `x op e` / `e op x` with op in {+, *}; returns the operator, the
/// node id of the self-read, and the other operand.
fn reduction_rhs(ast: &Ast, rhs: usize, name: &str) -> Option<(&'static str, usize, usize)> {
    let node = &ast.nodes[rhs];
    if node.kind != NodeKind::Binop {
        return None;
    }
    let op_text = ast.nodes[node.children[1]].text.as_str();
    let op: &'static str = match op_text {
        "+" => "+",
        "*" => "*",
        _ => return None,
    };
    let (a, b) = (node.children[0], node.children[2]);
    if ast.kind(a) == NodeKind::Identifier && ast.nodes[a].text == name {
        return Some((op, a, b));
    }
    if ast.kind(b) == NodeKind::Identifier && ast.nodes[b].text == name {
        return Some((op, b, a));
    }
    None
}

fn name_occurs(ast: &Ast, root: usize, name: &str) -> bool {
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        let node = &ast.nodes[id];
        if node.kind == NodeKind::Identifier && node.text == name {
            return true;
        }
        stack.extend(node.children.iter().copied());
    }
    false
}
