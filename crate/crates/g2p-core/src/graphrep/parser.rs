use crate::cfront::{Token, TokenKind};

use super::ast::{Ast, NodeKind, TreeNode};
use super::GraphError;

/// Recursive-descent parser for one for-statement of the restricted grammar.
///
/// Operators, clause delimiters and statement semicolons are materialized as
/// `operator_leaf` nodes, so the in-order leaf sequence reproduces the token
/// stream of the loop (minus the `for` keyword, header `(` and braces).
/// Precedence, tightest first: unary, `* / %`, `+ -`, relational, equality,
/// `&&`, `||`, assignment (right-associative).
pub fn parse_loop(tokens: &[Token]) -> Result<Ast, GraphError> {
    let mut p = Parser { tokens, pos: 0 };
    let tree = p.for_statement()?;
    if p.pos != tokens.len() {
        return Err(p.error_here("trailing tokens after for-statement"));
    }
    Ok(tree.flatten())
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

type PResult = Result<TreeNode, GraphError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_text(&self) -> &str {
        self.peek().map(|t| t.text.as_str()).unwrap_or("")
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn bump(&mut self) -> Result<&'a Token, GraphError> {
        let t = self
            .tokens
            .get(self.pos)
            .ok_or_else(|| GraphError::UnexpectedEnd {
                message: "token expected".into(),
            })?;
        self.pos += 1;
        Ok(t)
    }

    fn error_here(&self, message: &str) -> GraphError {
        match self.peek() {
            Some(t) => GraphError::Syntax {
                line: t.line,
                col: t.col,
                message: format!("{message} (found {:?})", t.text),
            },
            None => GraphError::UnexpectedEnd {
                message: message.into(),
            },
        }
    }

    fn expect(&mut self, text: &str) -> Result<TreeNode, GraphError> {
        match self.peek() {
            Some(t) if t.text == text => {
                self.pos += 1;
                Ok(TreeNode::leaf(NodeKind::OperatorLeaf, text))
            }
            _ => Err(self.error_here(&format!("expected {text:?}"))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::Keyword && t.text == kw)
    }

    fn at_type_keyword(&self) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::Keyword
            && crate::cfront::TYPE_KEYWORDS.contains(&t.text.as_str()))
    }

    fn for_statement(&mut self) -> PResult {
        if !self.at_keyword("for") {
            return Err(self.error_here("expected 'for'"));
        }
        self.bump()?;
        if self.peek_text() != "(" {
            return Err(self.error_here("expected '(' after 'for'"));
        }
        self.bump()?;

        // Init clause owns its ';'.
        let mut init_children = Vec::new();
        if self.peek_text() != ";" {
            if self.at_type_keyword() {
                init_children.push(self.declaration_body()?);
            } else {
                init_children.push(self.expr_list()?);
            }
        }
        init_children.push(self.expect(";")?);
        let init = TreeNode::interior(NodeKind::InitClause, init_children);

        // Condition clause owns its ';'.
        let mut cond_children = Vec::new();
        if self.peek_text() != ";" {
            cond_children.push(self.expression()?);
        }
        cond_children.push(self.expect(";")?);
        let cond = TreeNode::interior(NodeKind::CondClause, cond_children);

        // Update clause owns the closing ')'.
        let mut update_children = Vec::new();
        if self.peek_text() != ")" {
            update_children.push(self.expr_list()?);
        }
        update_children.push(self.expect(")")?);
        let update = TreeNode::interior(NodeKind::UpdateClause, update_children);

        let body = self.statement()?;
        Ok(TreeNode::interior(
            NodeKind::ForStmt,
            vec![init, cond, update, body],
        ))
    }

    fn statement(&mut self) -> PResult {
        match self.peek() {
            None => Err(self.error_here("expected statement")),
            Some(t) if t.text == "{" => {
                self.bump()?;
                let mut stmts = Vec::new();
                while self.peek_text() != "}" {
                    if self.peek().is_none() {
                        return Err(self.error_here("unterminated compound statement"));
                    }
                    stmts.push(self.statement()?);
                }
                self.bump()?;
                Ok(TreeNode::interior(NodeKind::CompoundStmt, stmts))
            }
            // An empty statement normalizes to an empty compound.
            Some(t) if t.text == ";" => {
                self.bump()?;
                Ok(TreeNode::interior(NodeKind::CompoundStmt, Vec::new()))
            }
            Some(t) if t.kind == TokenKind::Keyword => match t.text.as_str() {
                "for" => self.for_statement(),
                "while" => {
                    self.bump()?;
                    if self.peek_text() != "(" {
                        return Err(self.error_here("expected '(' after 'while'"));
                    }
                    self.bump()?;
                    let cond = self.expression()?;
                    if self.peek_text() != ")" {
                        return Err(self.error_here("expected ')' after while condition"));
                    }
                    self.bump()?;
                    let body = self.statement()?;
                    Ok(TreeNode::interior(NodeKind::WhileStmt, vec![cond, body]))
                }
                "if" => {
                    self.bump()?;
                    if self.peek_text() != "(" {
                        return Err(self.error_here("expected '(' after 'if'"));
                    }
                    self.bump()?;
                    let cond = self.expression()?;
                    if self.peek_text() != ")" {
                        return Err(self.error_here("expected ')' after if condition"));
                    }
                    self.bump()?;
                    let then_branch = self.statement()?;
                    let mut children = vec![cond, then_branch];
                    if self.at_keyword("else") {
                        self.bump()?;
                        children.push(self.statement()?);
                    }
                    Ok(TreeNode::interior(NodeKind::IfStmt, children))
                }
                "break" | "continue" | "return" => {
                    let kw = self.bump()?.text.clone();
                    let mut children = vec![TreeNode::leaf(NodeKind::OperatorLeaf, kw)];
                    if self.peek_text() != ";" {
                        children.push(self.expression()?);
                    }
                    children.push(self.expect(";")?);
                    Ok(TreeNode::interior(NodeKind::ExprStmt, children))
                }
                _ if self.at_type_keyword() => {
                    let mut decl = self.declaration_body()?;
                    decl.children.push(self.expect(";")?);
                    Ok(decl)
                }
                other => Err(self.error_here(&format!("unexpected keyword {other:?}"))),
            },
            _ => {
                let expr = self.expression()?;
                let semi = self.expect(";")?;
                Ok(TreeNode::interior(NodeKind::ExprStmt, vec![expr, semi]))
            }
        }
    }

    /// `int i = 0, j` without the trailing ';' (the caller owns it, since
    /// declarations appear both as statements and in for-loop init clauses).
    fn declaration_body(&mut self) -> PResult {
        let mut children = Vec::new();
        while self.at_type_keyword() {
            let kw = self.bump()?.text.clone();
            children.push(TreeNode::leaf(NodeKind::OperatorLeaf, kw));
        }
        loop {
            children.push(self.declarator()?);
            if self.peek_text() == "," {
                children.push(self.expect(",")?);
            } else {
                break;
            }
        }
        Ok(TreeNode::interior(NodeKind::DeclStmt, children))
    }

    fn declarator(&mut self) -> PResult {
        // Pointer declarators: the '*' becomes a prefix unop.
        if self.peek_text() == "*" {
            let star = self.expect("*")?;
            let inner = self.declarator()?;
            return Ok(TreeNode::interior(NodeKind::Unop, vec![star, inner]));
        }
        let name = match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                let t = self.bump()?;
                TreeNode::leaf(NodeKind::Identifier, t.text.clone())
            }
            _ => return Err(self.error_here("expected identifier in declaration")),
        };
        let mut core = name;
        while self.peek_text() == "[" {
            let open = self.expect("[")?;
            let mut children = vec![core, open];
            if self.peek_text() != "]" {
                children.push(self.expression()?);
            }
            children.push(self.expect("]")?);
            core = TreeNode::interior(NodeKind::Subscript, children);
        }
        if self.peek_text() == "=" {
            let eq = self.expect("=")?;
            let value = self.assignment()?;
            return Ok(TreeNode::interior(NodeKind::Assign, vec![core, eq, value]));
        }
        Ok(core)
    }

    /// Comma-separated expressions (for-init and for-update positions).
    /// The comma folds left-associatively as a binop.
    fn expr_list(&mut self) -> PResult {
        let mut expr = self.expression()?;
        while self.peek_text() == "," {
            let comma = self.expect(",")?;
            let rhs = self.expression()?;
            expr = TreeNode::interior(NodeKind::Binop, vec![expr, comma, rhs]);
        }
        Ok(expr)
    }

    fn expression(&mut self) -> PResult {
        self.assignment()
    }

    fn assignment(&mut self) -> PResult {
        let lhs = self.logical_or()?;
        if matches!(self.peek_text(), "=" | "+=" | "-=" | "*=" | "/=") {
            let op_text = self.bump()?.text.clone();
            let op = TreeNode::leaf(NodeKind::OperatorLeaf, op_text);
            let rhs = self.assignment()?;
            return Ok(TreeNode::interior(NodeKind::Assign, vec![lhs, op, rhs]));
        }
        Ok(lhs)
    }

    fn binary_level(&mut self, ops: &[&str], next: fn(&mut Self) -> PResult) -> PResult {
        let mut lhs = next(self)?;
        while ops.contains(&self.peek_text()) {
            let op_text = self.bump()?.text.clone();
            let op = TreeNode::leaf(NodeKind::OperatorLeaf, op_text);
            let rhs = next(self)?;
            lhs = TreeNode::interior(NodeKind::Binop, vec![lhs, op, rhs]);
        }
        Ok(lhs)
    }

    fn logical_or(&mut self) -> PResult {
        self.binary_level(&["||"], Self::logical_and)
    }

    fn logical_and(&mut self) -> PResult {
        self.binary_level(&["&&"], Self::equality)
    }

    fn equality(&mut self) -> PResult {
        self.binary_level(&["==", "!="], Self::relational)
    }

    fn relational(&mut self) -> PResult {
        self.binary_level(&["<", ">", "<=", ">="], Self::additive)
    }

    fn additive(&mut self) -> PResult {
        self.binary_level(&["+", "-"], Self::multiplicative)
    }

    fn multiplicative(&mut self) -> PResult {
        self.binary_level(&["*", "/", "%"], Self::unary)
    }

    fn unary(&mut self) -> PResult {
        match self.peek_text() {
            "-" | "+" | "!" | "~" | "&" | "*" | "++" | "--" => {
                let op_text = self.bump()?.text.clone();
                let op = TreeNode::leaf(NodeKind::OperatorLeaf, op_text);
                let operand = self.unary()?;
                Ok(TreeNode::interior(NodeKind::Unop, vec![op, operand]))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> PResult {
        let mut expr = self.primary()?;
        loop {
            match self.peek_text() {
                "[" => {
                    let open = self.expect("[")?;
                    let index = self.expression()?;
                    let close = self.expect("]")?;
                    expr = TreeNode::interior(NodeKind::Subscript, vec![expr, open, index, close]);
                }
                "(" => {
                    let open = self.expect("(")?;
                    let mut children = vec![expr, open];
                    if self.peek_text() != ")" {
                        loop {
                            children.push(self.assignment()?);
                            if self.peek_text() == "," {
                                children.push(self.expect(",")?);
                            } else {
                                break;
                            }
                        }
                    }
                    children.push(self.expect(")")?);
                    expr = TreeNode::interior(NodeKind::Call, children);
                }
                "++" | "--" => {
                    let op_text = self.bump()?.text.clone();
                    let op = TreeNode::leaf(NodeKind::OperatorLeaf, op_text);
                    expr = TreeNode::interior(NodeKind::Unop, vec![expr, op]);
                }
                "." | "->" => {
                    let op_text = self.bump()?.text.clone();
                    let op = TreeNode::leaf(NodeKind::OperatorLeaf, op_text);
                    let member = match self.peek() {
                        Some(t) if t.kind == TokenKind::Identifier => {
                            let t = self.bump()?;
                            TreeNode::leaf(NodeKind::Identifier, t.text.clone())
                        }
                        _ => return Err(self.error_here("expected member name")),
                    };
                    expr = TreeNode::interior(NodeKind::Binop, vec![expr, op, member]);
                }
                _ => break,
            }
        }
        Ok(expr)
    }

    fn primary(&mut self) -> PResult {
        match self.peek_kind() {
            Some(TokenKind::Identifier) => {
                let t = self.bump()?;
                Ok(TreeNode::leaf(NodeKind::Identifier, t.text.clone()))
            }
            Some(TokenKind::IntConstant)
            | Some(TokenKind::FloatConstant)
            | Some(TokenKind::StringLiteral) => {
                let t = self.bump()?;
                Ok(TreeNode::leaf(NodeKind::Constant, t.text.clone()))
            }
            _ if self.peek_text() == "(" => {
                self.bump()?;
                let inner = self.expression()?;
                if self.peek_text() != ")" {
                    return Err(self.error_here("expected ')'"));
                }
                self.bump()?;
                Ok(inner)
            }
            _ => Err(self.error_here("expected expression")),
        }
    }
}
