//! Recursive-descent parser for the `.dash` syntax.
//!
//! One left-to-right pass, fail-fast on the first syntax error. Only syntax
//! is checked here; semantic conformance (duplicate names, missing group
//! dimensions, dangling references) is the job of `validate_model`.

use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;
use crate::model::{
    group_label, DashboardModel, Datasource, Kpi, Query, QueryKind, StructureKind, Visualization,
    VisualizationType,
};

/// Parse DSL source text into a model, preserving declaration order.
pub fn parse_model(text: &str) -> Result<DashboardModel, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        position: 0,
    };
    let mut model = parser.model()?;
    parser.expect_eof()?;
    fill_group_keys(&mut model);
    Ok(model)
}

/// The concrete syntax has no slot for a visualization's group key, so it is
/// derived from the first member KPI's group label. Left empty when the
/// reference does not resolve; validation rejects such models anyway.
fn fill_group_keys(model: &mut DashboardModel) {
    let structure = model.structure;
    let kpis = &model.kpis;
    for vis in &mut model.visualizations {
        if vis.group_key.is_empty() {
            if let Some(label) = vis
                .kpi_names
                .first()
                .and_then(|name| kpis.iter().find(|k| &k.name == name))
                .and_then(|kpi| group_label(kpi, structure).ok())
            {
                vis.group_key = label.to_string();
            }
        }
    }
}

struct Parser<'t> {
    tokens: &'t [Token],
    position: usize,
}

/// Which optional KPI dimension an attribute keyword sets.
#[derive(Clone, Copy)]
enum Dimension {
    Category,
    Target,
    Group,
}

impl Dimension {
    fn from_keyword(word: &str) -> Option<Dimension> {
        match word {
            "category" => Some(Dimension::Category),
            "target" => Some(Dimension::Target),
            "group" => Some(Dimension::Group),
            _ => None,
        }
    }

    fn apply(self, kpi: &mut Kpi, value: String) {
        match self {
            Dimension::Category => kpi.category = Some(value),
            Dimension::Target => kpi.target = Some(value),
            Dimension::Group => kpi.custom_group = Some(value),
        }
    }
}

impl<'t> Parser<'t> {
    fn peek(&self) -> &'t Token {
        &self.tokens[self.position]
    }

    fn next(&mut self) -> &'t Token {
        let token = &self.tokens[self.position];
        if self.position + 1 < self.tokens.len() {
            self.position += 1;
        }
        token
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let token = self.peek();
        ParseError {
            location: token.location,
            expected: expected.into(),
            found: token.kind.describe(),
        }
    }

    /// Peek the keyword at the cursor, if the next token is a bare word.
    fn peek_word(&self) -> Option<&'t str> {
        match &self.peek().kind {
            TokenKind::Word(w) => Some(w.as_str()),
            _ => None,
        }
    }

    fn eat_keyword(&mut self, keyword: &str) -> Result<(), ParseError> {
        if self.peek_word() == Some(keyword) {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("\"{keyword}\"")))
        }
    }

    fn eat_string(&mut self, what: &str) -> Result<String, ParseError> {
        if let TokenKind::Str(s) = &self.peek().kind {
            let s = s.clone();
            self.next();
            Ok(s)
        } else {
            Err(self.error(what))
        }
    }

    fn eat_lbrace(&mut self) -> Result<(), ParseError> {
        if self.peek().kind == TokenKind::LBrace {
            self.next();
            Ok(())
        } else {
            Err(self.error("\"{\""))
        }
    }

    fn eat_rbrace(&mut self) -> Result<(), ParseError> {
        if self.peek().kind == TokenKind::RBrace {
            self.next();
            Ok(())
        } else {
            Err(self.error("\"}\""))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if self.peek().kind == TokenKind::Eof {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn model(&mut self) -> Result<DashboardModel, ParseError> {
        self.eat_keyword("dashboard")?;
        let title = self.eat_string("dashboard title string")?;
        self.eat_lbrace()?;
        self.eat_keyword("structure")?;
        let structure = self.structure_kind()?;
        let datasource = self.datasource()?;

        let mut kpis = Vec::new();
        let mut visualizations = Vec::new();

        // groupdef* kpi* vis* "}" — phases advance monotonically.
        loop {
            match self.peek_word() {
                Some(w) if Dimension::from_keyword(w).is_some() => {
                    self.group_block(&mut kpis)?
                }
                _ => break,
            }
        }
        while self.peek_word() == Some("kpi") {
            kpis.push(self.kpi(None)?);
        }
        while self.peek_word() == Some("visualization") {
            visualizations.push(self.visualization()?);
        }
        if self.peek().kind != TokenKind::RBrace {
            return Err(self.error("\"kpi\", \"visualization\", or \"}\""));
        }
        self.next();

        Ok(DashboardModel {
            title,
            structure,
            datasource,
            kpis,
            visualizations,
        })
    }

    fn structure_kind(&mut self) -> Result<StructureKind, ParseError> {
        let kind = match self.peek_word() {
            Some("categorical") => StructureKind::Categorical,
            Some("target") => StructureKind::Target,
            Some("custom") => StructureKind::Custom,
            _ => return Err(self.error("\"categorical\", \"target\", or \"custom\"")),
        };
        self.next();
        Ok(kind)
    }

    fn datasource(&mut self) -> Result<Datasource, ParseError> {
        self.eat_keyword("datasource")?;
        self.eat_lbrace()?;
        self.eat_keyword("uid")?;
        let uid = self.eat_string("datasource uid string")?;
        self.eat_keyword("type")?;
        let kind = self.eat_string("datasource type string")?;
        self.eat_rbrace()?;
        Ok(Datasource { uid, kind })
    }

    /// `category "X" { kpi* }` and friends; the block label becomes the
    /// default for that dimension on every KPI inside.
    fn group_block(&mut self, kpis: &mut Vec<Kpi>) -> Result<(), ParseError> {
        let word = self.peek_word().unwrap_or_default();
        let dimension = match Dimension::from_keyword(word) {
            Some(d) => d,
            None => return Err(self.error("\"category\", \"target\", or \"group\"")),
        };
        self.next();
        let label = self.eat_string("group label string")?;
        self.eat_lbrace()?;
        while self.peek_word() == Some("kpi") {
            kpis.push(self.kpi(Some((dimension, label.as_str())))?);
        }
        self.eat_rbrace()
    }

    fn kpi(&mut self, inherited: Option<(Dimension, &str)>) -> Result<Kpi, ParseError> {
        self.eat_keyword("kpi")?;
        let name = self.eat_string("KPI name string")?;
        self.eat_keyword("unit")?;
        let unit = self.eat_string("unit string")?;

        let mut kpi = Kpi {
            name,
            unit,
            category: None,
            target: None,
            custom_group: None,
            queries: Vec::new(),
        };
        if let Some((dimension, label)) = inherited {
            dimension.apply(&mut kpi, label.to_string());
        }
        // inline attributes override the enclosing block; last one wins
        while let Some(dimension) = self.peek_word().and_then(Dimension::from_keyword) {
            self.next();
            let value = self.eat_string("attribute value string")?;
            dimension.apply(&mut kpi, value);
        }

        self.eat_lbrace()?;
        kpi.queries.push(self.query()?);
        while self.peek_word() == Some("query") {
            kpi.queries.push(self.query()?);
        }
        self.eat_rbrace()?;
        Ok(kpi)
    }

    fn query(&mut self) -> Result<Query, ParseError> {
        self.eat_keyword("query")?;
        let kind = match self.peek_word() {
            Some("temporal") => QueryKind::Temporal,
            Some("instant") => QueryKind::Instant,
            _ => return Err(self.error("\"temporal\" or \"instant\"")),
        };
        self.next();
        let body = self.eat_string("query body string")?;
        Ok(Query { body, kind })
    }

    fn visualization(&mut self) -> Result<Visualization, ParseError> {
        self.eat_keyword("visualization")?;
        let id = self.eat_string("visualization id string")?;
        self.eat_keyword("type")?;
        let vtype = match self.peek_word() {
            Some("timeseries") => VisualizationType::Timeseries,
            Some("gauge") => VisualizationType::Gauge,
            Some("barchart") => VisualizationType::BarChart,
            _ => return Err(self.error("\"timeseries\", \"gauge\", or \"barchart\"")),
        };
        self.next();
        let generated = self.peek_word() == Some("generated");
        if generated {
            self.next();
        }
        self.eat_lbrace()?;
        self.eat_keyword("kpis")?;
        let mut kpi_names = vec![self.eat_string("KPI name string")?];
        while let TokenKind::Str(s) = &self.peek().kind {
            kpi_names.push(s.clone());
            self.next();
        }
        self.eat_rbrace()?;

        // group_key is filled in by fill_group_keys once all KPIs are known
        Ok(Visualization {
            id,
            vtype,
            kpi_names,
            group_key: String::new(),
            manual: !generated,
        })
    }
}
