// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <cctype>
#include <sstream>

#include "dcv/scenario.hpp"

namespace dcv {

namespace {

// -------------------------------------------------------------------
// Lexer

struct Token {
    enum class Kind {
        IDENT,
        STRING,
        LBRACE,
        RBRACE,
        LPAREN,
        RPAREN,
        LBRACKET,
        RBRACKET,
        COMMA,
        EQ,
        EQEQ,
        COLON,
        DOT,
        ARROW,
        END,
        BAD,
    };

    Kind kind = Kind::END;
    std::string text;
    int line = 1;
    int column = 1;
};

bool ident_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
}

std::vector<Token> lex(const std::string& source, std::vector<ParseDiagnostic>& diagnostics) {
    std::vector<Token> tokens;
    int line = 1;
    int column = 1;
    size_t pos = 0;

    auto advance = [&](size_t n) {
        for (size_t i = 0; i < n && pos < source.size(); ++i, ++pos) {
            if (source[pos] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    auto push = [&](Token::Kind kind, std::string text, int l, int c) {
        tokens.push_back(Token{kind, std::move(text), l, c});
    };

    while (pos < source.size()) {
        char c = source[pos];
        int tl = line;
        int tc = column;
        if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
            advance(1);
            continue;
        }
        if (c == '#') {  // line comment
            while (pos < source.size() && source[pos] != '\n') advance(1);
            continue;
        }
        if (c == '-' && pos + 1 < source.size() && source[pos + 1] == '>') {
            advance(2);
            push(Token::Kind::ARROW, "->", tl, tc);
            continue;
        }
        if (ident_char(c)) {
            size_t start = pos;
            while (pos < source.size() && ident_char(source[pos])) {
                // An identifier never swallows the arrow of `-> result`.
                if (source[pos] == '-' && pos + 1 < source.size() && source[pos + 1] == '>') {
                    break;
                }
                advance(1);
            }
            push(Token::Kind::IDENT, source.substr(start, pos - start), tl, tc);
            continue;
        }
        if (c == '"') {
            advance(1);
            size_t start = pos;
            while (pos < source.size() && source[pos] != '"' && source[pos] != '\n') advance(1);
            if (pos >= source.size() || source[pos] != '"') {
                diagnostics.push_back({ParseDiagnostic::Severity::ERROR, tl, tc,
                                       "unterminated string literal"});
                push(Token::Kind::BAD, "", tl, tc);
                continue;
            }
            push(Token::Kind::STRING, source.substr(start, pos - start), tl, tc);
            advance(1);
            continue;
        }
        if (c == '=') {
            if (pos + 1 < source.size() && source[pos + 1] == '=') {
                advance(2);
                push(Token::Kind::EQEQ, "==", tl, tc);
            } else {
                advance(1);
                push(Token::Kind::EQ, "=", tl, tc);
            }
            continue;
        }
        Token::Kind kind = Token::Kind::BAD;
        switch (c) {
            case '{': kind = Token::Kind::LBRACE; break;
            case '}': kind = Token::Kind::RBRACE; break;
            case '(': kind = Token::Kind::LPAREN; break;
            case ')': kind = Token::Kind::RPAREN; break;
            case '[': kind = Token::Kind::LBRACKET; break;
            case ']': kind = Token::Kind::RBRACKET; break;
            case ',': kind = Token::Kind::COMMA; break;
            case ':': kind = Token::Kind::COLON; break;
            case '.': kind = Token::Kind::DOT; break;
            default: break;
        }
        if (kind == Token::Kind::BAD) {
            diagnostics.push_back({ParseDiagnostic::Severity::ERROR, tl, tc,
                                   std::string("unexpected character '") + c + "'"});
        }
        advance(1);
        push(kind, std::string(1, c), tl, tc);
    }
    push(Token::Kind::END, "", line, column);
    return tokens;
}

// -------------------------------------------------------------------
// Parser

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words = {"READ", "WRITE",          "PERMIT",
                                                "DENY", "NOT_APPLICABLE", "_"};
    return words;
}

struct Pos {
    int line = 1;
    int column = 1;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<ParseDiagnostic>& diagnostics)
        : tokens_(std::move(tokens)), diagnostics_(diagnostics) {}

    Scenario scenario;
    bool saw_workflow = false;

    // Declaration sites, for positioned cross-reference diagnostics.
    std::map<std::string, Pos> policy_pos;
    std::map<std::string, Pos> agent_pos;
    std::map<std::string, Pos> coalition_pos;
    std::map<std::string, Pos> producer_pos;
    std::map<std::string, Pos> property_pos;
    std::map<std::string, Pos> node_pos;
    Pos workflow_pos;

    void parse_file() {
        while (!at(Token::Kind::END)) {
            if (accept_ident("settings")) {
                parse_settings();
            } else if (accept_ident("policy")) {
                parse_policy();
            } else if (accept_ident("agent")) {
                parse_agent();
            } else if (accept_ident("coalition")) {
                parse_coalition();
            } else if (accept_ident("producer")) {
                parse_producer();
            } else if (accept_ident("workflow")) {
                parse_workflow();
            } else if (accept_ident("property")) {
                parse_property();
            } else {
                error(peek(), "expected a top-level declaration (settings, policy, agent, "
                              "coalition, producer, workflow or property)");
                skip_token_or_block();
            }
        }
    }

    Formula parse_formula_body() { return parse_formula_impl(); }

    bool at_end() const { return at(Token::Kind::END); }
    const Token& peek() const { return tokens_[pos_]; }

private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
    std::vector<ParseDiagnostic>& diagnostics_;

    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
    bool at(Token::Kind kind) const { return peek().kind == kind; }
    bool at_ident(const std::string& text) const {
        return peek().kind == Token::Kind::IDENT && peek().text == text;
    }
    bool accept(Token::Kind kind) {
        if (!at(kind)) return false;
        next();
        return true;
    }
    bool accept_ident(const std::string& text) {
        if (!at_ident(text)) return false;
        next();
        return true;
    }

    void error(const Token& token, const std::string& message) {
        diagnostics_.push_back(
            {ParseDiagnostic::Severity::ERROR, token.line, token.column, message});
    }

    bool expect(Token::Kind kind, const std::string& what) {
        if (accept(kind)) return true;
        error(peek(), "expected " + what);
        return false;
    }

    /// Identifier with the scenario lexical rules; consumes on success.
    std::optional<std::string> expect_identifier(const std::string& what) {
        if (!at(Token::Kind::IDENT)) {
            error(peek(), "expected " + what);
            return std::nullopt;
        }
        Token token = next();
        if (!is_valid_identifier(token.text)) {
            error(token, "'" + token.text + "' is not a valid identifier");
            return std::nullopt;
        }
        return token.text;
    }

    void skip_token_or_block() {
        if (at(Token::Kind::END)) return;
        Token token = next();
        if (token.kind == Token::Kind::LBRACE) skip_balanced();
    }

    /// Skips to just past the brace matching an already-consumed '{'.
    void skip_balanced() {
        int depth = 1;
        while (!at(Token::Kind::END) && depth > 0) {
            Token token = next();
            if (token.kind == Token::Kind::LBRACE) ++depth;
            if (token.kind == Token::Kind::RBRACE) --depth;
        }
    }

    /// `= [ id, id, ... ]`, returning raw identifier texts.
    std::optional<std::vector<Token>> parse_id_list() {
        if (!expect(Token::Kind::EQ, "'='")) return std::nullopt;
        if (!expect(Token::Kind::LBRACKET, "'['")) return std::nullopt;
        std::vector<Token> items;
        if (accept(Token::Kind::RBRACKET)) return items;
        while (true) {
            if (!at(Token::Kind::IDENT)) {
                error(peek(), "expected an identifier in list");
                return std::nullopt;
            }
            Token token = next();
            if (!is_valid_identifier(token.text)) {
                error(token, "'" + token.text + "' is not a valid identifier");
            } else {
                items.push_back(token);
            }
            if (accept(Token::Kind::RBRACKET)) return items;
            if (!expect(Token::Kind::COMMA, "',' or ']'")) return std::nullopt;
        }
    }

    // ---------------------------------------------------------------
    // Blocks

    void parse_settings() {
        if (!expect(Token::Kind::LBRACE, "'{' after settings")) return;
        while (!accept(Token::Kind::RBRACE)) {
            if (at(Token::Kind::END)) {
                error(peek(), "unterminated settings block");
                return;
            }
            if (accept_ident("max_steps")) {
                if (auto n = parse_positive_number()) scenario.settings.max_steps = (int)*n;
            } else if (accept_ident("state_cap")) {
                if (auto n = parse_positive_number()) scenario.settings.state_cap = *n;
            } else {
                error(peek(), "unknown settings key");
                skip_token_or_block();
            }
        }
    }

    std::optional<unsigned long long> parse_positive_number() {
        if (!expect(Token::Kind::EQ, "'='")) return std::nullopt;
        if (!at(Token::Kind::IDENT)) {
            error(peek(), "expected a number");
            return std::nullopt;
        }
        Token token = next();
        unsigned long long value = 0;
        for (char c : token.text) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                error(token, "expected a positive number");
                return std::nullopt;
            }
            value = value * 10 + static_cast<unsigned long long>(c - '0');
            if (value > 1000000000000ULL) {
                error(token, "number out of range");
                return std::nullopt;
            }
        }
        if (value == 0) {
            error(token, "expected a positive number");
            return std::nullopt;
        }
        return value;
    }

    std::optional<Target> parse_target_tuple() {
        if (!expect(Token::Kind::LPAREN, "'(' to open a target")) return std::nullopt;
        Target target;
        bool saw_subjects = false;
        bool saw_resources = false;
        bool saw_actions = false;
        while (!accept(Token::Kind::RPAREN)) {
            if (at(Token::Kind::END)) {
                error(peek(), "unterminated target");
                return std::nullopt;
            }
            accept(Token::Kind::COMMA);
            if (at_ident("subjects")) {
                Token key = next();
                if (saw_subjects) error(key, "duplicate 'subjects'");
                saw_subjects = true;
                if (auto items = parse_id_list()) {
                    for (const Token& t : *items) target.subjects.insert(AgentId{t.text});
                } else {
                    return std::nullopt;
                }
            } else if (at_ident("resources")) {
                Token key = next();
                if (saw_resources) error(key, "duplicate 'resources'");
                saw_resources = true;
                if (auto items = parse_id_list()) {
                    for (const Token& t : *items) target.resources.insert(Information{t.text});
                } else {
                    return std::nullopt;
                }
            } else if (at_ident("actions")) {
                Token key = next();
                if (saw_actions) error(key, "duplicate 'actions'");
                saw_actions = true;
                if (auto items = parse_id_list()) {
                    for (const Token& t : *items) {
                        auto action = action_from_string(t.text);
                        if (!action.has_value()) {
                            error(t, "unknown action '" + t.text + "' (READ or WRITE)");
                        } else {
                            target.actions.insert(*action);
                        }
                    }
                } else {
                    return std::nullopt;
                }
            } else {
                error(peek(), "expected subjects, resources or actions");
                return std::nullopt;
            }
        }
        return target;
    }

    void parse_policy() {
        auto name = expect_identifier("a policy name");
        if (!name.has_value()) {
            skip_token_or_block();
            return;
        }
        Pos pos{peek().line, peek().column};
        if (!expect(Token::Kind::LBRACE, "'{' after the policy name")) return;

        Policy policy;
        bool saw_target = false;
        bool saw_combine = false;
        while (!accept(Token::Kind::RBRACE)) {
            if (at(Token::Kind::END)) {
                error(peek(), "unterminated policy block");
                return;
            }
            if (accept_ident("target")) {
                if (!expect(Token::Kind::EQ, "'='")) return;
                if (auto target = parse_target_tuple()) {
                    policy.target = *target;
                    saw_target = true;
                } else {
                    skip_balanced_if_open();
                }
            } else if (accept_ident("combine")) {
                if (!expect(Token::Kind::EQ, "'='")) return;
                Token token = peek();
                if (auto alg = at(Token::Kind::IDENT) ? comb_alg_from_string(next().text)
                                                      : std::nullopt) {
                    policy.rule_comb_alg = *alg;
                    saw_combine = true;
                } else {
                    error(token,
                          "combining algorithm must be DENY_OVERRIDES or PERMIT_OVERRIDES");
                }
            } else if (accept_ident("rule")) {
                if (auto rule = parse_rule()) policy.rules.insert(*rule);
            } else {
                error(peek(), "expected target, combine or rule in policy");
                skip_token_or_block();
            }
        }
        Token here = peek();
        if (!saw_target) {
            error(here, "policy '" + *name + "' requires a target");
        }
        if (!saw_combine) {
            error(here, "policy '" + *name + "' requires a combining algorithm");
        }
        if (!scenario.policies.emplace(*name, std::move(policy)).second) {
            error(here, "duplicate policy '" + *name + "'");
        } else {
            policy_pos[*name] = pos;
        }
    }

    std::optional<Rule> parse_rule() {
        if (!expect(Token::Kind::LBRACE, "'{' after rule")) return std::nullopt;
        Rule rule;
        bool saw_effect = false;
        while (!accept(Token::Kind::RBRACE)) {
            if (at(Token::Kind::END)) {
                error(peek(), "unterminated rule block");
                return std::nullopt;
            }
            if (accept_ident("target")) {
                if (!expect(Token::Kind::EQ, "'='")) return std::nullopt;
                if (auto target = parse_target_tuple()) {
                    rule.target = *target;
                } else {
                    return std::nullopt;
                }
            } else if (accept_ident("effect")) {
                if (!expect(Token::Kind::EQ, "'='")) return std::nullopt;
                Token token = peek();
                std::optional<Effect> effect =
                    at(Token::Kind::IDENT) ? effect_from_string(next().text) : std::nullopt;
                if (effect == Effect::PERMIT || effect == Effect::DENY) {
                    rule.effect = *effect;
                    saw_effect = true;
                } else {
                    error(token, "rule effect must be PERMIT or DENY");
                }
            } else {
                error(peek(), "expected target or effect in rule");
                skip_token_or_block();
            }
        }
        if (!saw_effect) {
            error(peek(), "rule requires an effect");
            return std::nullopt;
        }
        return rule;
    }

    void parse_agent() {
        auto id = expect_identifier("an agent id");
        if (!id.has_value()) {
            skip_token_or_block();
            return;
        }
        Pos pos{peek().line, peek().column};
        if (!expect(Token::Kind::LBRACE, "'{' after the agent id")) return;
        AgentDecl decl;
        decl.id = AgentId{*id};
        while (!accept(Token::Kind::RBRACE)) {
            if (at(Token::Kind::END)) {
                error(peek(), "unterminated agent block");
                return;
            }
            if (accept_ident("info")) {
                if (auto items = parse_id_list()) {
                    for (const Token& t : *items) decl.info.insert(Information{t.text});
                }
            } else if (accept_ident("policy")) {
                if (auto name = expect_identifier("a policy name")) {
                    decl.policies.push_back(*name);
                }
            } else {
                error(peek(), "expected info or policy in agent");
                skip_token_or_block();
            }
        }
        if (!scenario.agents.emplace(decl.id, decl).second) {
            error(peek(), "duplicate agent '" + *id + "'");
        } else {
            agent_pos[*id] = pos;
        }
    }

    void parse_coalition() {
        auto id = expect_identifier("a coalition id");
        if (!id.has_value()) {
            skip_token_or_block();
            return;
        }
        Pos pos{peek().line, peek().column};
        if (!expect(Token::Kind::LBRACE, "'{' after the coalition id")) return;
        CoalitionDecl decl;
        decl.id = CoalitionId{*id};
        while (!accept(Token::Kind::RBRACE)) {
            if (at(Token::Kind::END)) {
                error(peek(), "unterminated coalition block");
                return;
            }
            if (accept_ident("members")) {
                if (auto items = parse_id_list()) {
                    for (const Token& t : *items) decl.members.insert(AgentId{t.text});
                }
            } else if (accept_ident("share")) {
                auto agent = expect_identifier("an agent id after share");
                if (!agent.has_value()) continue;
                if (auto items = parse_id_list()) {
                    auto& target = decl.shares[AgentId{*agent}];
                    for (const Token& t : *items) target.insert(Information{t.text});
                }
            } else {
                error(peek(), "expected members or share in coalition");
                skip_token_or_block();
            }
        }
        if (!scenario.coalitions.emplace(decl.id, decl).second) {
            error(peek(), "duplicate coalition '" + *id + "'");
        } else {
            coalition_pos[*id] = pos;
        }
    }

    void parse_producer() {
        auto name = expect_identifier("a producer name");
        if (!name.has_value()) {
            skip_token_or_block();
            return;
        }
        Pos pos{peek().line, peek().column};
        if (!expect(Token::Kind::LBRACE, "'{' after the producer name")) return;
        ProducerSpec spec;
        spec.name = *name;
        spec.mints = *name;
        bool saw_actor = false;
        while (!accept(Token::Kind::RBRACE)) {
            if (at(Token::Kind::END)) {
                error(peek(), "unterminated producer block");
                return;
            }
            auto keyed_ident = [&](const char* key) -> std::optional<std::string> {
                if (!accept_ident(key)) return std::nullopt;
                if (!expect(Token::Kind::EQ, "'='")) return std::nullopt;
                return expect_identifier("an identifier");
            };
            if (at_ident("actor")) {
                if (auto v = keyed_ident("actor")) {
                    spec.actor = AgentId{*v};
                    saw_actor = true;
                }
            } else if (at_ident("mints")) {
                if (auto v = keyed_ident("mints")) spec.mints = *v;
            } else if (at_ident("shares_into")) {
                if (auto v = keyed_ident("shares_into")) spec.shares_into = CoalitionId{*v};
            } else if (at_ident("attach_policy")) {
                if (auto v = keyed_ident("attach_policy")) spec.attach_policy = *v;
            } else {
                error(peek(), "expected actor, mints, shares_into or attach_policy");
                skip_token_or_block();
            }
        }
        if (!saw_actor) {
            error(peek(), "producer '" + *name + "' requires an actor");
        }
        if (!scenario.producers.emplace(*name, spec).second) {
            error(peek(), "duplicate producer '" + *name + "'");
        } else {
            producer_pos[*name] = pos;
        }
    }

    // ---------------------------------------------------------------
    // Workflow

    void parse_workflow() {
        Pos pos{peek().line, peek().column};
        if (!expect(Token::Kind::LBRACE, "'{' after workflow")) return;
        if (saw_workflow) {
            error(peek(), "a scenario may contain only one workflow");
            skip_balanced();
            return;
        }
        saw_workflow = true;
        workflow_pos = pos;
        bool saw_entry = false;
        while (!accept(Token::Kind::RBRACE)) {
            if (at(Token::Kind::END)) {
                error(peek(), "unterminated workflow block");
                return;
            }
            if (accept_ident("entry")) {
                if (!expect(Token::Kind::EQ, "'='")) continue;
                if (auto id = expect_identifier("a node id")) {
                    if (saw_entry) error(peek(), "duplicate entry declaration");
                    scenario.workflow.entry = NodeId{*id};
                    saw_entry = true;
                }
            } else if (accept_ident("node")) {
                parse_node();
            } else {
                error(peek(), "expected node or entry in workflow");
                skip_token_or_block();
            }
        }
        if (!saw_entry) {
            error(peek(), "workflow requires an entry declaration");
        }
    }

    void parse_node() {
        Token id_token = peek();
        auto id = expect_identifier("a node id");
        if (!id.has_value()) {
            skip_token_or_block();
            return;
        }
        Pos pos{id_token.line, id_token.column};
        if (!expect(Token::Kind::COLON, "':' after the node id")) return;
        NodeId node_id{*id};
        std::optional<WorkflowNode> node;
        if (accept_ident("update")) {
            node = parse_update_node(node_id);
        } else if (accept_ident("if")) {
            node = parse_condition_node(node_id);
        } else if (accept_ident("done")) {
            node = make_terminal(node_id, TerminalOutcome::SUCCESS);
        } else if (accept_ident("fail")) {
            if (at(Token::Kind::STRING)) {
                node = make_terminal(node_id, TerminalOutcome::ERROR, next().text);
            } else {
                error(peek(), "fail requires a quoted message");
            }
        } else {
            error(peek(), "expected update, if, done or fail");
            return;
        }
        if (!node.has_value()) return;
        if (!scenario.workflow.nodes.emplace(node_id, std::move(*node)).second) {
            error(id_token, "duplicate node '" + *id + "'");
        } else {
            node_pos[*id] = pos;
        }
    }

    std::optional<WorkflowNode> parse_update_node(const NodeId& id) {
        auto op = expect_identifier("an operation name");
        if (!op.has_value()) return std::nullopt;
        if (!expect(Token::Kind::LPAREN, "'(' after the operation name")) return std::nullopt;
        std::vector<ArgExpr> args;
        if (!accept(Token::Kind::RPAREN)) {
            while (true) {
                auto arg = parse_arg();
                if (!arg.has_value()) return std::nullopt;
                args.push_back(std::move(*arg));
                if (accept(Token::Kind::RPAREN)) break;
                if (!expect(Token::Kind::COMMA, "',' or ')'")) return std::nullopt;
            }
        }
        std::optional<std::string> result_var;
        if (accept(Token::Kind::ARROW)) {
            result_var = expect_identifier("a result variable");
            if (!result_var.has_value()) return std::nullopt;
        }
        if (!accept_ident("then")) {
            error(peek(), "expected 'then' and a successor node");
            return std::nullopt;
        }
        auto next_id = expect_identifier("a node id after then");
        if (!next_id.has_value()) return std::nullopt;
        return make_update(id, *op, std::move(args), result_var, NodeId{*next_id});
    }

    std::optional<ArgExpr> parse_arg() {
        if (at(Token::Kind::LBRACE)) {
            next();
            std::vector<Term> items;
            if (!accept(Token::Kind::RBRACE)) {
                while (true) {
                    if (!at(Token::Kind::IDENT)) {
                        error(peek(), "expected an identifier in set literal");
                        return std::nullopt;
                    }
                    items.push_back(Term{next().text});
                    if (accept(Token::Kind::RBRACE)) break;
                    if (!expect(Token::Kind::COMMA, "',' or '}'")) return std::nullopt;
                }
            }
            return ArgExpr::of_set(std::move(items));
        }
        if (at(Token::Kind::IDENT)) {
            Token token = next();
            if (auto action = action_from_string(token.text)) {
                return ArgExpr::of_action(*action);
            }
            return ArgExpr::of_term(Term{token.text});
        }
        error(peek(), "expected an argument");
        return std::nullopt;
    }

    std::optional<WorkflowNode> parse_condition_node(const NodeId& id) {
        ExprPtr guard = parse_expr(/*allow_or=*/true, /*allow_implies=*/false,
                                   /*allow_event=*/false);
        if (!guard) return std::nullopt;
        if (!accept_ident("yes")) {
            error(peek(), "expected 'yes' and a node id after the guard");
            return std::nullopt;
        }
        auto yes_id = expect_identifier("a node id after yes");
        if (!yes_id.has_value()) return std::nullopt;
        std::optional<NodeId> no_id;
        if (accept_ident("no")) {
            auto id_text = expect_identifier("a node id after no");
            if (!id_text.has_value()) return std::nullopt;
            no_id = NodeId{*id_text};
        }
        return make_condition(id, guard, NodeId{*yes_id}, no_id);
    }

    // ---------------------------------------------------------------
    // Expressions (guards and formula bodies)

    ExprPtr parse_expr(bool allow_or, bool allow_implies, bool allow_event) {
        ExprPtr lhs = allow_or ? parse_or(allow_or, allow_implies, allow_event)
                               : parse_and(allow_or, allow_implies, allow_event);
        if (!lhs) return nullptr;
        if (allow_implies && accept_ident("implies")) {
            ExprPtr rhs = parse_expr(allow_or, allow_implies, allow_event);  // right-assoc
            if (!rhs) return nullptr;
            return BoolExpr::make_implies(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_or(bool allow_or, bool allow_implies, bool allow_event) {
        ExprPtr lhs = parse_and(allow_or, allow_implies, allow_event);
        if (!lhs) return nullptr;
        while (accept_ident("or")) {
            ExprPtr rhs = parse_and(allow_or, allow_implies, allow_event);
            if (!rhs) return nullptr;
            lhs = BoolExpr::make_or(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_and(bool allow_or, bool allow_implies, bool allow_event) {
        ExprPtr lhs = parse_unary(allow_or, allow_implies, allow_event);
        if (!lhs) return nullptr;
        while (accept_ident("and")) {
            ExprPtr rhs = parse_unary(allow_or, allow_implies, allow_event);
            if (!rhs) return nullptr;
            lhs = BoolExpr::make_and(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_unary(bool allow_or, bool allow_implies, bool allow_event) {
        if (accept_ident("not")) {
            ExprPtr operand = parse_unary(allow_or, allow_implies, allow_event);
            if (!operand) return nullptr;
            return BoolExpr::make_not(std::move(operand));
        }
        if (accept(Token::Kind::LPAREN)) {
            ExprPtr inner = parse_expr(allow_or, allow_implies, allow_event);
            if (!inner) return nullptr;
            if (!expect(Token::Kind::RPAREN, "')'")) return nullptr;
            return inner;
        }
        if (at_ident("request") || at_ident("request_info")) {
            next();
            return parse_request_atom();
        }
        if (allow_event && at_ident("event")) {
            next();
            return parse_event_atom();
        }
        error(peek(), allow_event
                          ? "expected a request or event atom, 'not' or a parenthesized formula"
                          : "expected a request atom, 'not' or a parenthesized guard");
        return nullptr;
    }

    ExprPtr parse_request_atom() {
        if (!expect(Token::Kind::LPAREN, "'(' after request")) return nullptr;
        RequestAtom atom;
        if (!at(Token::Kind::IDENT)) {
            error(peek(), "expected an agent");
            return nullptr;
        }
        atom.subject = Term{next().text};
        if (!expect(Token::Kind::COMMA, "','")) return nullptr;
        if (!at(Token::Kind::IDENT)) {
            error(peek(), "expected a coalition");
            return nullptr;
        }
        atom.coalition = Term{next().text};
        if (!expect(Token::Kind::COMMA, "','")) return nullptr;
        Token action_token = peek();
        std::optional<Action> action =
            at(Token::Kind::IDENT) ? action_from_string(next().text) : std::nullopt;
        if (!action.has_value()) {
            error(action_token, "expected READ or WRITE");
            return nullptr;
        }
        atom.action = *action;
        if (!expect(Token::Kind::COMMA, "','")) return nullptr;
        if (!expect(Token::Kind::LBRACE, "'{'")) return nullptr;
        if (!accept(Token::Kind::RBRACE)) {
            while (true) {
                if (!at(Token::Kind::IDENT)) {
                    error(peek(), "expected an information item");
                    return nullptr;
                }
                atom.infos.push_back(Term{next().text});
                if (accept(Token::Kind::RBRACE)) break;
                if (!expect(Token::Kind::COMMA, "',' or '}'")) return nullptr;
            }
        }
        if (atom.infos.empty()) {
            error(peek(), "a request names at least one information item");
            return nullptr;
        }
        if (!expect(Token::Kind::RPAREN, "')'")) return nullptr;
        if (!expect(Token::Kind::EQEQ, "'=='")) return nullptr;
        Token effect_token = peek();
        std::optional<Effect> effect =
            at(Token::Kind::IDENT) ? effect_from_string(next().text) : std::nullopt;
        if (!effect.has_value()) {
            error(effect_token, "expected PERMIT, DENY or NOT_APPLICABLE");
            return nullptr;
        }
        atom.expected = *effect;
        return BoolExpr::make_request(std::move(atom));
    }

    ExprPtr parse_event_atom() {
        EventAtom atom;
        auto op = expect_identifier("an operation name after event");
        if (!op.has_value()) return nullptr;
        atom.op = *op;
        if (!expect(Token::Kind::LPAREN, "'(' after the operation name")) return nullptr;
        if (!accept(Token::Kind::RPAREN)) {
            while (true) {
                if (!at(Token::Kind::IDENT)) {
                    error(peek(), "expected an argument pattern");
                    return nullptr;
                }
                atom.args.push_back(Term{next().text});
                if (accept(Token::Kind::RPAREN)) break;
                if (!expect(Token::Kind::COMMA, "',' or ')'")) return nullptr;
            }
        }
        if (accept(Token::Kind::ARROW)) {
            if (!at(Token::Kind::IDENT)) {
                error(peek(), "expected a result pattern after '->'");
                return nullptr;
            }
            atom.result = Term{next().text};
        }
        return BoolExpr::make_event(std::move(atom));
    }

    // ---------------------------------------------------------------
    // Properties / formulas

    void parse_property() {
        auto name = expect_identifier("a property name");
        if (!name.has_value()) {
            skip_token_or_block();
            return;
        }
        Pos pos{peek().line, peek().column};
        if (!accept_ident("forbidden")) {
            error(peek(), "expected 'forbidden' after the property name");
            skip_token_or_block();
            return;
        }
        if (!expect(Token::Kind::LBRACE, "'{' to open the formula")) return;
        Formula formula = parse_formula_impl();
        if (!expect(Token::Kind::RBRACE, "'}' to close the formula")) {
            skip_balanced();
            return;
        }
        PropertySpec spec{*name, std::move(formula)};
        if (!scenario.properties.emplace(*name, std::move(spec)).second) {
            error(peek(), "duplicate property '" + *name + "'");
        } else {
            property_pos[*name] = pos;
        }
    }

    Formula parse_formula_impl() {
        Formula formula;
        while (accept_ident("exists")) {
            Quantifier q;
            auto var = expect_identifier("a variable name");
            if (!var.has_value()) return formula;
            q.var = *var;
            if (!expect(Token::Kind::COLON, "':' and a sort")) return formula;
            Token sort_token = peek();
            std::optional<Sort> sort =
                at(Token::Kind::IDENT) ? sort_from_string(next().text) : std::nullopt;
            if (!sort.has_value()) {
                error(sort_token, "expected INFORMATION, AGENT or COALITION");
                return formula;
            }
            q.sort = *sort;
            for (const Quantifier& earlier : formula.prefix) {
                if (earlier.var == q.var) {
                    error(sort_token, "duplicate quantifier for '" + q.var + "'");
                }
            }
            formula.prefix.push_back(std::move(q));
            if (!expect(Token::Kind::DOT, "'.' after the quantifier")) return formula;
        }
        formula.body = parse_expr(/*allow_or=*/false, /*allow_implies=*/true,
                                  /*allow_event=*/true);
        return formula;
    }

    void skip_balanced_if_open() {
        // After a failed sub-parse inside a block we resynchronize at the
        // next closing brace.
        while (!at(Token::Kind::END) && !at(Token::Kind::RBRACE)) next();
    }
};

// -------------------------------------------------------------------
// Semantic validation

void check_cross_references(Parser& p, std::vector<ParseDiagnostic>& diagnostics) {
    Scenario& s = p.scenario;
    auto error_at = [&](const Pos& pos, const std::string& message) {
        diagnostics.push_back(
            {ParseDiagnostic::Severity::ERROR, pos.line, pos.column, message});
    };
    auto warning_at = [&](const Pos& pos, const std::string& message) {
        diagnostics.push_back(
            {ParseDiagnostic::Severity::WARNING, pos.line, pos.column, message});
    };

    // Identifier namespaces: agents, coalitions and information items
    // share one namespace so constant terms resolve unambiguously.
    std::set<std::string> info_names;
    for (const auto& [aid, decl] : s.agents) {
        for (const Information& item : decl.info) info_names.insert(item.item);
    }
    for (const auto& [aid, decl] : s.agents) {
        const Pos pos = p.agent_pos.count(aid.value) ? p.agent_pos[aid.value] : Pos{};
        if (reserved_words().count(aid.value) != 0) {
            error_at(pos, "'" + aid.value + "' is a reserved word");
        }
        if (s.coalitions.count(CoalitionId{aid.value}) != 0) {
            error_at(pos, "'" + aid.value + "' names both an agent and a coalition");
        }
        if (info_names.count(aid.value) != 0) {
            error_at(pos, "'" + aid.value + "' names both an agent and an information item");
        }
        for (const std::string& policy : decl.policies) {
            if (s.policies.count(policy) == 0) {
                error_at(pos, "agent '" + aid.value + "' references unknown policy '" + policy +
                                  "'");
            }
        }
        for (const Information& item : decl.info) {
            if (reserved_words().count(item.item) != 0) {
                error_at(pos, "'" + item.item + "' is a reserved word");
            }
        }
    }
    for (const auto& [cid, decl] : s.coalitions) {
        const Pos pos = p.coalition_pos.count(cid.value) ? p.coalition_pos[cid.value] : Pos{};
        if (reserved_words().count(cid.value) != 0) {
            error_at(pos, "'" + cid.value + "' is a reserved word");
        }
        if (info_names.count(cid.value) != 0) {
            error_at(pos, "'" + cid.value + "' names both a coalition and an information item");
        }
        for (const AgentId& member : decl.members) {
            if (s.agents.count(member) == 0) {
                error_at(pos, "coalition '" + cid.value + "' lists unknown member '" +
                                  member.value + "'");
            }
        }
        for (const auto& [agent, items] : decl.shares) {
            auto agent_it = s.agents.find(agent);
            if (agent_it == s.agents.end()) {
                error_at(pos, "share references unknown agent '" + agent.value + "'");
                continue;
            }
            for (const Information& item : items) {
                if (agent_it->second.info.count(item) == 0) {
                    error_at(pos, "agent '" + agent.value + "' does not hold '" + item.item +
                                      "' and cannot share it");
                }
            }
        }
    }

    std::set<std::string> mint_prefixes;
    for (const auto& [name, spec] : s.producers) {
        const Pos pos = p.producer_pos.count(name) ? p.producer_pos[name] : Pos{};
        if (OpRegistry::builtin_ops().count(name) != 0) {
            error_at(pos, "producer '" + name + "' shadows a built-in operation");
        }
        if (s.agents.count(spec.actor) == 0) {
            error_at(pos, "producer '" + name + "' names unknown actor '" + spec.actor.value +
                              "'");
        }
        if (spec.shares_into.has_value() && s.coalitions.count(*spec.shares_into) == 0) {
            error_at(pos, "producer '" + name + "' shares into unknown coalition '" +
                              spec.shares_into->value + "'");
        }
        if (spec.attach_policy.has_value() && s.policies.count(*spec.attach_policy) == 0) {
            error_at(pos, "producer '" + name + "' attaches unknown policy '" +
                              *spec.attach_policy + "'");
        }
        if (s.agents.count(AgentId{spec.mints}) != 0 ||
            s.coalitions.count(CoalitionId{spec.mints}) != 0) {
            error_at(pos, "mint prefix '" + spec.mints + "' collides with a declared id");
        }
        if (reserved_words().count(spec.mints) != 0) {
            error_at(pos, "'" + spec.mints + "' is a reserved word");
        }
        mint_prefixes.insert(spec.mints);
    }

    // Policy targets may reference declared items or producer mints.
    for (const auto& [name, policy] : s.policies) {
        const Pos pos = p.policy_pos.count(name) ? p.policy_pos[name] : Pos{};
        auto check_target = [&](const Target& target) {
            for (const AgentId& subject : target.subjects) {
                if (s.agents.count(subject) == 0) {
                    error_at(pos, "policy '" + name + "' targets unknown subject '" +
                                      subject.value + "'");
                }
            }
            for (const Information& resource : target.resources) {
                if (info_names.count(resource.item) == 0 &&
                    mint_prefixes.count(resource.item) == 0) {
                    error_at(pos, "policy '" + name + "' targets unknown resource '" +
                                      resource.item + "'");
                }
            }
        };
        check_target(policy.target);
        for (const Rule& rule : policy.rules) {
            if (rule.target.has_value()) check_target(*rule.target);
        }
    }

    if (!p.saw_workflow) {
        diagnostics.push_back(
            {ParseDiagnostic::Severity::ERROR, 1, 1, "scenario requires a workflow"});
    } else {
        OpRegistry registry = build_registry(s);
        ValidationReport report = validate_workflow(s.workflow, registry);
        for (const ValidationIssue& issue : report.issues) {
            Pos pos = p.node_pos.count(issue.node.value) ? p.node_pos[issue.node.value]
                                                         : p.workflow_pos;
            if (issue.severity == ValidationIssue::Severity::ERROR) {
                error_at(pos, issue.code + ": " + issue.message);
            } else {
                warning_at(pos, issue.code + ": " + issue.message);
            }
        }
    }

    // Properties: sorts consistent, constants declared, event operations
    // registered.
    for (const auto& [name, spec] : s.properties) {
        const Pos pos = p.property_pos.count(name) ? p.property_pos[name] : Pos{};
        if (!spec.formula.body) {
            error_at(pos, "property '" + name + "' has no formula");
            continue;
        }
        if (auto sort_error = check_sorts(spec.formula)) {
            error_at(pos, "property '" + name + "': " + *sort_error);
        }
        for (const std::string& ident : free_identifiers(spec.formula)) {
            bool known = s.agents.count(AgentId{ident}) != 0 ||
                         s.coalitions.count(CoalitionId{ident}) != 0 ||
                         info_names.count(ident) != 0 ||
                         effect_from_string(ident).has_value() ||
                         action_from_string(ident).has_value();
            if (!known) {
                error_at(pos, "property '" + name + "' references undeclared identifier '" +
                                  ident + "'");
            }
        }
        std::function<void(const ExprPtr&)> check_events = [&](const ExprPtr& e) {
            if (!e) return;
            if (e->kind == BoolExpr::Kind::EVENT) {
                const std::string& op = e->event->op;
                if (OpRegistry::builtin_ops().count(op) == 0 && s.producers.count(op) == 0) {
                    error_at(pos, "property '" + name + "' references unknown operation '" + op +
                                      "'");
                }
            }
            check_events(e->lhs);
            check_events(e->rhs);
        };
        check_events(spec.formula.body);
    }
}

}  // namespace

ParseResult parse_scenario(const std::string& source) {
    ParseResult result;
    std::vector<Token> tokens = lex(source, result.diagnostics);
    Parser parser(std::move(tokens), result.diagnostics);
    parser.parse_file();
    check_cross_references(parser, result.diagnostics);

    bool has_error = false;
    for (const ParseDiagnostic& d : result.diagnostics) {
        if (d.severity == ParseDiagnostic::Severity::ERROR) has_error = true;
    }
    if (!has_error) {
        result.scenario = std::move(parser.scenario);
    } else if (result.diagnostics.empty()) {
        result.diagnostics.push_back({ParseDiagnostic::Severity::ERROR, 1, 1, "parse failed"});
    }
    return result;
}

FormulaParseResult parse_formula(const std::string& source) {
    FormulaParseResult result;
    std::vector<Token> tokens = lex(source, result.diagnostics);
    Parser parser(std::move(tokens), result.diagnostics);
    Formula formula = parser.parse_formula_body();
    if (!parser.at_end()) {
        result.diagnostics.push_back({ParseDiagnostic::Severity::ERROR, parser.peek().line,
                                      parser.peek().column, "unexpected trailing input"});
    }
    if (formula.body) {
        if (auto sort_error = check_sorts(formula)) {
            result.diagnostics.push_back(
                {ParseDiagnostic::Severity::ERROR, 1, 1, *sort_error});
        }
    }
    bool has_error = false;
    for (const ParseDiagnostic& d : result.diagnostics) {
        if (d.severity == ParseDiagnostic::Severity::ERROR) has_error = true;
    }
    if (!has_error && formula.body) {
        result.formula = std::move(formula);
    } else if (result.diagnostics.empty()) {
        result.diagnostics.push_back({ParseDiagnostic::Severity::ERROR, 1, 1, "parse failed"});
    }
    return result;
}

OpRegistry build_registry(const Scenario& scenario) {
    OpRegistry registry;
    for (const auto& [aid, decl] : scenario.agents) {
        registry.agents.insert(aid);
        registry.infos.insert(decl.info.begin(), decl.info.end());
    }
    for (const auto& [cid, decl] : scenario.coalitions) {
        registry.coalitions.insert(cid);
    }
    for (const auto& [name, spec] : scenario.producers) {
        ProducerDecl decl;
        decl.name = name;
        decl.actor = spec.actor;
        decl.mint_prefix = spec.mints;
        decl.shares_into = spec.shares_into;
        if (spec.attach_policy.has_value()) {
            // Tolerate a dangling reference: the registry is also built
            // while validating scenarios that already carry diagnostics.
            auto policy_it = scenario.policies.find(*spec.attach_policy);
            if (policy_it != scenario.policies.end()) {
                decl.attach_policy = policy_it->second;
            }
        }
        registry.producers.emplace(name, std::move(decl));
    }
    return registry;
}

CoalitionState initial_state(const Scenario& scenario) {
    return initial_state(scenario, {});
}

CoalitionState initial_state(const Scenario& scenario,
                             const std::map<AgentId, Pdp>& aac_overrides) {
    CoalitionState state;
    for (const auto& [aid, decl] : scenario.agents) {
        Pdp aac;
        for (const std::string& name : decl.policies) {
            aac.policies.insert(scenario.policies.at(name));
        }
        auto override_it = aac_overrides.find(aid);
        if (override_it != aac_overrides.end()) {
            aac = override_it->second;
        }
        state = create_agent(state, aid, decl.info, aac);
    }
    for (const auto& [cid, decl] : scenario.coalitions) {
        state = create_coalition(state, cid);
        for (const AgentId& member : decl.members) {
            state = join(state, member, cid);
        }
    }
    for (const auto& [cid, decl] : scenario.coalitions) {
        for (const auto& [agent, items] : decl.shares) {
            state = share_info(state, agent, cid, items);
        }
    }
    return state;
}

std::string render_diagnostics(const std::vector<ParseDiagnostic>& diagnostics) {
    std::ostringstream os;
    for (const ParseDiagnostic& d : diagnostics) {
        os << (d.severity == ParseDiagnostic::Severity::ERROR ? "error" : "warning") << ':'
           << d.line << ':' << d.column << ": " << d.message << '\n';
    }
    return os.str();
}

}  // namespace dcv
