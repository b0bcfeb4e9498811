use super::ast::{Ast, NodeKind};

/// Statement-level control-flow pairs over existing AST node ids.
///
/// Participating nodes: the three loop clauses, statement nodes, and call
/// nodes. Compound statements are transparent (their children chain
/// directly). For the loop itself: init -> cond, cond -> first body
/// statement (or the update clause when the body is empty), sequential
/// chaining between body statements, last statement -> update, and
/// update -> cond; loop exit stays implicit. Every call node receives one
/// edge from its enclosing statement or clause. A nested for-statement is a
/// chained statement and additionally flows into its own init clause; the
/// outermost for node stays outside the flow so that everything is reachable
/// from the init clause.
pub fn build_cfg(ast: &Ast) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if ast.is_empty() || ast.kind(ast.root) != NodeKind::ForStmt {
        return edges;
    }
    for_loop_flow(ast, ast.root, false, &mut edges);
    edges
}

fn for_loop_flow(ast: &Ast, for_id: usize, nested: bool, edges: &mut Vec<(usize, usize)>) {
    let children = &ast.nodes[for_id].children;
    let (init, cond, update, body) = (children[0], children[1], children[2], children[3]);

    if nested {
        edges.push((for_id, init));
    }
    edges.push((init, cond));
    for clause in [init, cond, update] {
        attach_calls(ast, clause, clause, edges);
    }

    let stmts = body_statements(ast, body);
    if stmts.is_empty() {
        edges.push((cond, update));
    } else {
        edges.push((cond, stmts[0]));
        for pair in stmts.windows(2) {
            edges.push((pair[0], pair[1]));
        }
        edges.push((*stmts.last().unwrap(), update));
    }
    edges.push((update, cond));

    for &s in &stmts {
        statement_flow(ast, s, edges);
    }
}

/// Statements of a body, flattened through compound nodes.
fn body_statements(ast: &Ast, body: usize) -> Vec<usize> {
    match ast.kind(body) {
        NodeKind::CompoundStmt => {
            let mut out = Vec::new();
            for &c in &ast.nodes[body].children {
                if ast.kind(c) == NodeKind::CompoundStmt {
                    out.extend(body_statements(ast, c));
                } else {
                    out.push(c);
                }
            }
            out
        }
        _ => vec![body],
    }
}

fn statement_flow(ast: &Ast, stmt: usize, edges: &mut Vec<(usize, usize)>) {
    match ast.kind(stmt) {
        NodeKind::ExprStmt | NodeKind::DeclStmt => {
            attach_calls(ast, stmt, stmt, edges);
        }
        NodeKind::IfStmt => {
            let children = &ast.nodes[stmt].children;
            attach_calls(ast, children[0], stmt, edges);
            for &branch in &children[1..] {
                let stmts = body_statements(ast, branch);
                if let Some(&first) = stmts.first() {
                    edges.push((stmt, first));
                    for pair in stmts.windows(2) {
                        edges.push((pair[0], pair[1]));
                    }
                    for &s in &stmts {
                        statement_flow(ast, s, edges);
                    }
                }
            }
        }
        NodeKind::WhileStmt => {
            let children = &ast.nodes[stmt].children;
            attach_calls(ast, children[0], stmt, edges);
            let stmts = body_statements(ast, children[1]);
            if let Some(&first) = stmts.first() {
                edges.push((stmt, first));
                for pair in stmts.windows(2) {
                    edges.push((pair[0], pair[1]));
                }
                edges.push((*stmts.last().unwrap(), stmt));
                for &s in &stmts {
                    statement_flow(ast, s, edges);
                }
            }
        }
        NodeKind::ForStmt => {
            for_loop_flow(ast, stmt, true, edges);
        }
        _ => {}
    }
}

/// `origin -> call` for every call node in the expression subtree rooted at
/// `subtree`, without descending into nested statements.
fn attach_calls(ast: &Ast, subtree: usize, origin: usize, edges: &mut Vec<(usize, usize)>) {
    let mut stack = vec![subtree];
    while let Some(id) = stack.pop() {
        let node = &ast.nodes[id];
        if id != subtree && is_statement_kind(node.kind) {
            continue;
        }
        if node.kind == NodeKind::Call {
            edges.push((origin, id));
        }
        // Deterministic order: children pushed reversed so pops are in order.
        for &c in node.children.iter().rev() {
            stack.push(c);
        }
    }
}

fn is_statement_kind(kind: NodeKind) -> bool {
    matches!(
        kind,
        NodeKind::ForStmt
            | NodeKind::WhileStmt
            | NodeKind::IfStmt
            | NodeKind::CompoundStmt
            | NodeKind::ExprStmt
            | NodeKind::DeclStmt
    )
}
