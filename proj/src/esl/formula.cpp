#include "esl/formula.hpp"

#include <algorithm>
#include <cctype>

namespace esl {

namespace {
FormulaPtr mk(FKind k) {
    auto p = std::make_shared<Formula>();
    p->kind = k;
    return p;
}
FormulaPtr mk1(FKind k, FormulaPtr a) {
    auto p = std::make_shared<Formula>();
    p->kind = k;
    p->lhs = std::move(a);
    return p;
}
FormulaPtr mk2(FKind k, FormulaPtr a, FormulaPtr b) {
    auto p = std::make_shared<Formula>();
    p->kind = k;
    p->lhs = std::move(a);
    p->rhs = std::move(b);
    return p;
}
}  // namespace

FormulaPtr Formula::atom(std::string name) {
    auto p = mk(FKind::Atom);
    const_cast<Formula*>(p.get())->text = std::move(name);
    return p;
}
FormulaPtr Formula::t() { return mk(FKind::True); }
FormulaPtr Formula::f() { return mk(FKind::False); }
FormulaPtr Formula::notf(FormulaPtr a) { return mk1(FKind::Not, std::move(a)); }
FormulaPtr Formula::andf(FormulaPtr a, FormulaPtr b) { return mk2(FKind::And, std::move(a), std::move(b)); }
FormulaPtr Formula::orf(FormulaPtr a, FormulaPtr b) { return mk2(FKind::Or, std::move(a), std::move(b)); }
FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) { return mk2(FKind::Implies, std::move(a), std::move(b)); }
FormulaPtr Formula::iff(FormulaPtr a, FormulaPtr b) { return mk2(FKind::Iff, std::move(a), std::move(b)); }
FormulaPtr Formula::pathAll(FormulaPtr a) { return mk1(FKind::PathAll, std::move(a)); }
FormulaPtr Formula::pathExists(FormulaPtr a) { return mk1(FKind::PathExists, std::move(a)); }
FormulaPtr Formula::next(FormulaPtr a) { return mk1(FKind::Next, std::move(a)); }
FormulaPtr Formula::until(FormulaPtr a, FormulaPtr b) { return mk2(FKind::Until, std::move(a), std::move(b)); }
FormulaPtr Formula::finally_(FormulaPtr a) { return mk1(FKind::Finally, std::move(a)); }
FormulaPtr Formula::globally(FormulaPtr a) { return mk1(FKind::Globally, std::move(a)); }
FormulaPtr Formula::know(AgentTag t, FormulaPtr a) {
    auto p = mk1(FKind::Know, std::move(a));
    const_cast<Formula*>(p.get())->tag = std::move(t);
    return p;
}
FormulaPtr Formula::everyoneKnow(std::vector<AgentTag> ts, FormulaPtr a) {
    auto p = mk1(FKind::EveryoneKnow, std::move(a));
    const_cast<Formula*>(p.get())->tags = std::move(ts);
    return p;
}
FormulaPtr Formula::distKnow(std::vector<AgentTag> ts, FormulaPtr a) {
    auto p = mk1(FKind::DistKnow, std::move(a));
    const_cast<Formula*>(p.get())->tags = std::move(ts);
    return p;
}
FormulaPtr Formula::commonKnow(std::vector<AgentTag> ts, FormulaPtr a) {
    auto p = mk1(FKind::CommonKnow, std::move(a));
    const_cast<Formula*>(p.get())->tags = std::move(ts);
    return p;
}
FormulaPtr Formula::exists(std::string var, FormulaPtr a) {
    auto p = mk1(FKind::Exists, std::move(a));
    const_cast<Formula*>(p.get())->text = std::move(var);
    return p;
}
FormulaPtr Formula::localEq(AgentTag t, std::string var) {
    auto p = mk(FKind::LocalEq);
    const_cast<Formula*>(p.get())->tag = std::move(t);
    const_cast<Formula*>(p.get())->text = std::move(var);
    return p;
}
FormulaPtr Formula::conj(const std::vector<FormulaPtr>& parts) {
    if (parts.empty()) return t();
    FormulaPtr out = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) out = andf(out, parts[i]);
    return out;
}
FormulaPtr Formula::disj(const std::vector<FormulaPtr>& parts) {
    if (parts.empty()) return f();
    FormulaPtr out = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) out = orf(out, parts[i]);
    return out;
}

bool Formula::operator==(const Formula& o) const {
    if (kind != o.kind || text != o.text || !(tag == o.tag) || tags != o.tags) return false;
    if (static_cast<bool>(lhs) != static_cast<bool>(o.lhs)) return false;
    if (static_cast<bool>(rhs) != static_cast<bool>(o.rhs)) return false;
    if (lhs && !(*lhs == *o.lhs)) return false;
    if (rhs && !(*rhs == *o.rhs)) return false;
    return true;
}

const char* fragment_name(Fragment f) {
    switch (f) {
        case Fragment::CTLK: return "CTLK";
        case Fragment::ESLMinus: return "ESL-";
        case Fragment::CTLStarK: return "CTL*K";
        case Fragment::FullESL: return "ESL";
    }
    return "?";
}

bool is_state_formula(const FormulaPtr& f) {
    switch (f->kind) {
        case FKind::Atom:
        case FKind::True:
        case FKind::False:
        case FKind::LocalEq:
        case FKind::PathAll:
        case FKind::PathExists:
        case FKind::Know:
        case FKind::EveryoneKnow:
        case FKind::DistKnow:
        case FKind::CommonKnow:
            return true;
        case FKind::Next:
        case FKind::Until:
        case FKind::Finally:
        case FKind::Globally:
            return false;
        case FKind::Not:
        case FKind::Exists:
            return is_state_formula(f->lhs);
        case FKind::And:
        case FKind::Or:
        case FKind::Implies:
        case FKind::Iff:
            return is_state_formula(f->lhs) && is_state_formula(f->rhs);
    }
    return false;
}

// ── Desugar ─────────────────────────────────────────────────────────────────

FormulaPtr desugar(const FormulaPtr& f) {
    auto wrapPath = [](FormulaPtr body) {
        // Knowledge of a path formula means knowledge of its A-closure.
        if (!is_state_formula(body)) return Formula::pathAll(std::move(body));
        return body;
    };
    switch (f->kind) {
        case FKind::Atom:
        case FKind::True:
        case FKind::False:
        case FKind::LocalEq:
            return f;
        case FKind::Not:
            return Formula::notf(desugar(f->lhs));
        case FKind::And:
            return Formula::andf(desugar(f->lhs), desugar(f->rhs));
        case FKind::Or:
            return Formula::orf(desugar(f->lhs), desugar(f->rhs));
        case FKind::Implies:
            return Formula::orf(Formula::notf(desugar(f->lhs)), desugar(f->rhs));
        case FKind::Iff: {
            FormulaPtr a = desugar(f->lhs), b = desugar(f->rhs);
            return Formula::andf(Formula::orf(Formula::notf(a), b),
                                 Formula::orf(Formula::notf(b), a));
        }
        case FKind::PathAll: {
            FormulaPtr a = desugar(f->lhs);
            if (is_state_formula(a)) return a;
            return Formula::pathAll(a);
        }
        case FKind::PathExists: {
            FormulaPtr a = desugar(f->lhs);
            if (is_state_formula(a)) return a;
            return Formula::notf(Formula::pathAll(Formula::notf(a)));
        }
        case FKind::Next:
            return Formula::next(desugar(f->lhs));
        case FKind::Until:
            return Formula::until(desugar(f->lhs), desugar(f->rhs));
        case FKind::Finally:
            return Formula::until(Formula::t(), desugar(f->lhs));
        case FKind::Globally:
            return Formula::notf(Formula::until(Formula::t(), Formula::notf(desugar(f->lhs))));
        case FKind::Know:
            return Formula::distKnow({f->tag}, wrapPath(desugar(f->lhs)));
        case FKind::EveryoneKnow: {
            if (f->tags.empty()) return Formula::t();
            FormulaPtr body = wrapPath(desugar(f->lhs));
            std::vector<FormulaPtr> parts;
            for (const AgentTag& t : f->tags) parts.push_back(Formula::distKnow({t}, body));
            return Formula::conj(parts);
        }
        case FKind::DistKnow:
            return Formula::distKnow(f->tags, wrapPath(desugar(f->lhs)));
        case FKind::CommonKnow:
            return Formula::commonKnow(f->tags, wrapPath(desugar(f->lhs)));
        case FKind::Exists:
            return Formula::exists(f->text, desugar(f->lhs));
    }
    return f;
}

// ── Fragment classification ─────────────────────────────────────────────────

namespace {

bool hasQuantifierConstruct(const FormulaPtr& f) {
    if (f->kind == FKind::Exists || f->kind == FKind::LocalEq) return true;
    if (f->lhs && hasQuantifierConstruct(f->lhs)) return true;
    if (f->rhs && hasQuantifierConstruct(f->rhs)) return true;
    return false;
}

bool ctlShaped(const FormulaPtr& f);

// A path-quantified body fits the CTL shapes when, after stripping negations,
// it is a Next or Until over state formulas.
bool ctlShapedBody(const FormulaPtr& body) {
    FormulaPtr core = body;
    while (core->kind == FKind::Not) core = core->lhs;
    if (core->kind == FKind::Next)
        return is_state_formula(core->lhs) && ctlShaped(core->lhs);
    if (core->kind == FKind::Until)
        return is_state_formula(core->lhs) && ctlShaped(core->lhs) &&
               is_state_formula(core->rhs) && ctlShaped(core->rhs);
    return false;
}

bool ctlShaped(const FormulaPtr& f) {
    switch (f->kind) {
        case FKind::Atom:
        case FKind::True:
        case FKind::False:
        case FKind::LocalEq:
            return true;
        case FKind::Not:
            return ctlShaped(f->lhs);
        case FKind::And:
        case FKind::Or:
            return ctlShaped(f->lhs) && ctlShaped(f->rhs);
        case FKind::Next:
        case FKind::Until:
            return false;  // bare temporal operator
        case FKind::PathAll:
            return ctlShapedBody(f->lhs);
        case FKind::DistKnow:
        case FKind::CommonKnow:
        case FKind::Exists:
            return ctlShaped(f->lhs);
        default:
            throw InputError("classify_fragment expects a desugared formula");
    }
}

}  // namespace

Fragment classify_fragment(const FormulaPtr& f) {
    bool shaped = is_state_formula(f) && ctlShaped(f);
    bool quant = hasQuantifierConstruct(f);
    if (shaped) return quant ? Fragment::ESLMinus : Fragment::CTLK;
    return quant ? Fragment::FullESL : Fragment::CTLStarK;
}

// ── Variables ───────────────────────────────────────────────────────────────

namespace {
void freeVarsInto(const FormulaPtr& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
    if (f->kind == FKind::LocalEq) {
        if (!bound.count(f->text)) out.insert(f->text);
        return;
    }
    if (f->kind == FKind::Exists) {
        bool fresh = bound.insert(f->text).second;
        freeVarsInto(f->lhs, bound, out);
        if (fresh) bound.erase(f->text);
        return;
    }
    if (f->lhs) freeVarsInto(f->lhs, bound, out);
    if (f->rhs) freeVarsInto(f->rhs, bound, out);
}

void collectVarNames(const FormulaPtr& f, std::set<std::string>& out) {
    if (f->kind == FKind::LocalEq || f->kind == FKind::Exists) out.insert(f->text);
    if (f->lhs) collectVarNames(f->lhs, out);
    if (f->rhs) collectVarNames(f->rhs, out);
}

FormulaPtr rewriteDg(const FormulaPtr& f, std::set<std::string>& used, int& counter) {
    FormulaPtr a = f->lhs ? rewriteDg(f->lhs, used, counter) : nullptr;
    FormulaPtr b = f->rhs ? rewriteDg(f->rhs, used, counter) : nullptr;
    auto rebuilt = std::make_shared<Formula>(*f);
    rebuilt->lhs = a;
    rebuilt->rhs = b;
    FormulaPtr g = rebuilt;
    if (f->kind == FKind::DistKnow && !f->tags.empty()) {
        std::string x;
        do {
            x = "v" + std::to_string(counter++);
        } while (used.count(x));
        used.insert(x);
        std::vector<FormulaPtr> eqs;
        for (const AgentTag& t : f->tags) eqs.push_back(Formula::localEq(t, x));
        FormulaPtr lid = Formula::conj(eqs);
        return Formula::exists(
            x, Formula::andf(lid, Formula::distKnow({}, Formula::implies(lid, a))));
    }
    return g;
}
}  // namespace

std::set<std::string> free_vars(const FormulaPtr& f) {
    std::set<std::string> bound, out;
    freeVarsInto(f, bound, out);
    return out;
}

FormulaPtr rewrite_dg_via_exists(const FormulaPtr& f) {
    FormulaPtr core = desugar(f);
    std::set<std::string> used;
    collectVarNames(core, used);
    int counter = 0;
    return rewriteDg(core, used, counter);
}

// ── Rendering ───────────────────────────────────────────────────────────────

namespace {

// Precedence levels: implies 0 < or 1 < and 2 < unary 3 < primary 4.
int levelOf(FKind k) {
    switch (k) {
        case FKind::Implies:
        case FKind::Iff:
            return 0;
        case FKind::Or: return 1;
        case FKind::And: return 2;
        case FKind::Atom:
        case FKind::True:
        case FKind::False:
        case FKind::LocalEq:
        case FKind::Until:  // always printed inside its own parentheses
            return 4;
        default: return 3;
    }
}

std::string tagsText(const std::vector<AgentTag>& tags) {
    std::string out = "[";
    for (size_t i = 0; i < tags.size(); ++i) {
        if (i) out += ",";
        out += tags[i].str();
    }
    return out + "]";
}

void renderInto(const FormulaPtr& f, int parentLevel, std::string& out);

// Prefix operators separate themselves from the operand with a space unless
// the operand starts with its own punctuation.
void renderPrefixOperand(const FormulaPtr& f, std::string& out) {
    std::string operand;
    renderInto(f, 3, operand);
    if (!operand.empty() && operand[0] != '!') out += " ";
    out += operand;
}

void renderInto(const FormulaPtr& f, int parentLevel, std::string& out) {
    int lvl = levelOf(f->kind);
    bool paren = lvl < parentLevel;
    if (paren) out += "(";
    switch (f->kind) {
        case FKind::Atom: out += f->text; break;
        case FKind::True: out += "true"; break;
        case FKind::False: out += "false"; break;
        case FKind::LocalEq: out += "loc(" + f->tag.str() + "," + f->text + ")"; break;
        case FKind::Not:
            out += "!";
            renderInto(f->lhs, 3, out);
            break;
        case FKind::And:
            renderInto(f->lhs, 2, out);
            out += " & ";
            renderInto(f->rhs, 3, out);
            break;
        case FKind::Or:
            renderInto(f->lhs, 1, out);
            out += " | ";
            renderInto(f->rhs, 2, out);
            break;
        case FKind::Implies:
            renderInto(f->lhs, 1, out);
            out += " -> ";
            renderInto(f->rhs, 0, out);
            break;
        case FKind::Iff:
            renderInto(f->lhs, 1, out);
            out += " <-> ";
            renderInto(f->rhs, 0, out);
            break;
        case FKind::PathAll:
            out += "A";
            renderPrefixOperand(f->lhs, out);
            break;
        case FKind::PathExists:
            out += "E";
            renderPrefixOperand(f->lhs, out);
            break;
        case FKind::Next:
            out += "X";
            renderPrefixOperand(f->lhs, out);
            break;
        case FKind::Finally:
            out += "F";
            renderPrefixOperand(f->lhs, out);
            break;
        case FKind::Globally:
            out += "G";
            renderPrefixOperand(f->lhs, out);
            break;
        case FKind::Until:
            out += "(";
            renderInto(f->lhs, 0, out);
            out += " U ";
            renderInto(f->rhs, 0, out);
            out += ")";
            break;
        case FKind::Know:
            out += "K[" + f->tag.str() + "]";
            renderPrefixOperand(f->lhs, out);
            break;
        case FKind::EveryoneKnow:
            out += "E" + tagsText(f->tags);
            renderPrefixOperand(f->lhs, out);
            break;
        case FKind::DistKnow:
            out += "D" + tagsText(f->tags);
            renderPrefixOperand(f->lhs, out);
            break;
        case FKind::CommonKnow:
            out += "C" + tagsText(f->tags);
            renderPrefixOperand(f->lhs, out);
            break;
        case FKind::Exists:
            out += "exists " + f->text + " .";
            renderPrefixOperand(f->lhs, out);
            break;
    }
    if (paren) out += ")";
}

}  // namespace

std::string render_formula(const FormulaPtr& f) {
    std::string out;
    renderInto(f, 0, out);
    return out;
}

std::vector<AgentTag> all_base_tags(const Environment& env) {
    std::vector<AgentTag> out;
    for (AgentId i = 0; i < env.agentCount(); ++i) out.push_back(AgentTag::base(env.agents.name(i)));
    return out;
}
std::vector<AgentTag> all_strategic_tags(const Environment& env) {
    std::vector<AgentTag> out;
    for (AgentId i = 0; i < env.agentCount(); ++i)
        out.push_back(AgentTag::strategic(env.agents.name(i)));
    return out;
}

// ── Parser ──────────────────────────────────────────────────────────────────

namespace {

struct Token {
    enum Type {
        End, Ident, Atom, LParen, RParen, LBracket, RBracket, LBrace, RBrace,
        Comma, Dot, Bang, Amp, Pipe, Arrow, IffArrow,
        KwA, KwE, KwX, KwF, KwG, KwU, KwK, KwD, KwC, KwExists, KwLoc, KwSig, KwTrue, KwFalse,
    } type = End;
    std::string text;
    int col = 0;
};

bool atomChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '+' ||
           c == '/' || c == '.';
}

class Lexer {
  public:
    explicit Lexer(std::string_view s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.col = static_cast<int>(pos_) + 1;
        if (pos_ >= s_.size()) return;
        char c = s_[pos_];
        auto single = [&](Token::Type t) {
            tok_.type = t;
            tok_.text = c;
            ++pos_;
        };
        switch (c) {
            case '(': single(Token::LParen); return;
            case ')': single(Token::RParen); return;
            case '[': single(Token::LBracket); return;
            case ']': single(Token::RBracket); return;
            case '{': single(Token::LBrace); return;
            case '}': single(Token::RBrace); return;
            case ',': single(Token::Comma); return;
            case '.': single(Token::Dot); return;
            case '!': single(Token::Bang); return;
            case '&': single(Token::Amp); return;
            case '|': single(Token::Pipe); return;
            case '-':
                if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
                    tok_.type = Token::Arrow;
                    pos_ += 2;
                    return;
                }
                throw ParseError("stray '-'", -1, tok_.col);
            case '<':
                if (pos_ + 2 < s_.size() && s_[pos_ + 1] == '-' && s_[pos_ + 2] == '>') {
                    tok_.type = Token::IffArrow;
                    pos_ += 3;
                    return;
                }
                throw ParseError("stray '<'", -1, tok_.col);
            default: break;
        }
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            throw ParseError(std::string("unexpected character '") + c + "'", -1, tok_.col);
        size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string word(s_.substr(start, pos_ - start));
        // An '=' glued to an identifier makes a valued atom like u0=3.
        if (pos_ < s_.size() && s_[pos_] == '=') {
            ++pos_;
            size_t vstart = pos_;
            while (pos_ < s_.size() && atomChar(s_[pos_])) ++pos_;
            if (pos_ == vstart) throw ParseError("atom value missing after '='", -1, tok_.col);
            tok_.type = Token::Atom;
            tok_.text = word + "=" + std::string(s_.substr(vstart, pos_ - vstart));
            return;
        }
        static const std::unordered_map<std::string, Token::Type> keywords = {
            {"A", Token::KwA}, {"E", Token::KwE}, {"X", Token::KwX}, {"F", Token::KwF},
            {"G", Token::KwG}, {"U", Token::KwU}, {"K", Token::KwK}, {"D", Token::KwD},
            {"C", Token::KwC}, {"exists", Token::KwExists}, {"loc", Token::KwLoc},
            {"sig", Token::KwSig}, {"true", Token::KwTrue}, {"false", Token::KwFalse},
        };
        auto kw = keywords.find(word);
        tok_.type = kw == keywords.end() ? Token::Ident : kw->second;
        tok_.text = word;
    }

    std::string_view s_;
    size_t pos_ = 0;
    Token tok_;
};

class FormulaParser {
  public:
    FormulaParser(std::string_view text, const Environment* env) : lex_(text), env_(env) {}

    FormulaPtr parse() {
        FormulaPtr f = formula();
        if (lex_.peek().type != Token::End)
            throw ParseError("unexpected input after formula", -1, lex_.peek().col);
        return f;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg, -1, lex_.peek().col);
    }
    void expect(Token::Type t, const char* what) {
        if (lex_.peek().type != t) fail(std::string("expected ") + what);
        lex_.take();
    }

    FormulaPtr formula() {
        FormulaPtr a = orExpr();
        if (lex_.peek().type == Token::Arrow) {
            lex_.take();
            return Formula::implies(a, formula());
        }
        if (lex_.peek().type == Token::IffArrow) {
            lex_.take();
            return Formula::iff(a, formula());
        }
        return a;
    }
    FormulaPtr orExpr() {
        FormulaPtr a = andExpr();
        while (lex_.peek().type == Token::Pipe) {
            lex_.take();
            a = Formula::orf(a, andExpr());
        }
        return a;
    }
    FormulaPtr andExpr() {
        FormulaPtr a = unary();
        while (lex_.peek().type == Token::Amp) {
            lex_.take();
            a = Formula::andf(a, unary());
        }
        return a;
    }

    // Only tags can occur here, so single-letter operator keywords double as
    // agent names.
    bool wordToken(Token::Type t) const {
        switch (t) {
            case Token::Ident:
            case Token::KwA:
            case Token::KwE:
            case Token::KwX:
            case Token::KwF:
            case Token::KwG:
            case Token::KwU:
            case Token::KwK:
            case Token::KwD:
            case Token::KwC:
            case Token::KwTrue:
            case Token::KwFalse:
                return true;
            default:
                return false;
        }
    }
    AgentTag tagItem() {
        const Token& t = lex_.peek();
        if (t.type == Token::KwSig) {
            lex_.take();
            expect(Token::LParen, "'(' after sig");
            if (!wordToken(lex_.peek().type)) fail("agent name expected in sig(...)");
            std::string agent = lex_.take().text;
            expect(Token::RParen, "')'");
            checkAgent(agent);
            return AgentTag::strategic(agent);
        }
        if (wordToken(t.type)) {
            std::string name = lex_.take().text;
            if (name == "e") return AgentTag::env();
            checkAgent(name);
            return AgentTag::base(name);
        }
        fail("agent tag expected");
    }
    std::vector<AgentTag> tagList() {
        expect(Token::LBracket, "'['");
        bool braced = lex_.peek().type == Token::LBrace;
        if (braced) lex_.take();
        std::vector<AgentTag> tags;
        if (lex_.peek().type != Token::RBracket && lex_.peek().type != Token::RBrace) {
            tags.push_back(tagItem());
            while (lex_.peek().type == Token::Comma) {
                lex_.take();
                tags.push_back(tagItem());
            }
        }
        if (braced) expect(Token::RBrace, "'}'");
        expect(Token::RBracket, "']'");
        return tags;
    }
    void checkAgent(const std::string& name) {
        if (env_ && !env_->agents.find(name))
            fail("unknown agent '" + name + "'");
    }
    void checkAtom(const std::string& name) {
        if (env_ && !env_->props.find(name))
            fail("unknown proposition '" + name + "'");
    }

    FormulaPtr unary() {
        switch (lex_.peek().type) {
            case Token::Bang: lex_.take(); return Formula::notf(unary());
            case Token::KwA: lex_.take(); return Formula::pathAll(unary());
            case Token::KwX: lex_.take(); return Formula::next(unary());
            case Token::KwF: lex_.take(); return Formula::finally_(unary());
            case Token::KwG: lex_.take(); return Formula::globally(unary());
            case Token::KwE: {
                lex_.take();
                if (lex_.peek().type == Token::LBracket) {
                    std::vector<AgentTag> tags = tagList();
                    return Formula::everyoneKnow(std::move(tags), unary());
                }
                return Formula::pathExists(unary());
            }
            case Token::KwK: {
                lex_.take();
                std::vector<AgentTag> tags = tagList();
                if (tags.size() != 1) fail("K takes exactly one agent tag");
                return Formula::know(tags[0], unary());
            }
            case Token::KwD: {
                lex_.take();
                std::vector<AgentTag> tags = tagList();
                return Formula::distKnow(std::move(tags), unary());
            }
            case Token::KwC: {
                lex_.take();
                std::vector<AgentTag> tags = tagList();
                return Formula::commonKnow(std::move(tags), unary());
            }
            case Token::KwExists: {
                lex_.take();
                if (lex_.peek().type != Token::Ident) fail("variable name expected after exists");
                std::string var = lex_.take().text;
                expect(Token::Dot, "'.' after exists variable");
                return Formula::exists(var, unary());
            }
            default: return primary();
        }
    }

    FormulaPtr primary() {
        switch (lex_.peek().type) {
            case Token::LParen: {
                lex_.take();
                FormulaPtr a = formula();
                if (lex_.peek().type == Token::KwU) {
                    lex_.take();
                    FormulaPtr b = formula();
                    expect(Token::RParen, "')'");
                    return Formula::until(a, b);
                }
                expect(Token::RParen, "')'");
                return a;
            }
            case Token::KwTrue: lex_.take(); return Formula::t();
            case Token::KwFalse: lex_.take(); return Formula::f();
            case Token::KwLoc: {
                lex_.take();
                expect(Token::LParen, "'('");
                AgentTag t = tagItem();
                expect(Token::Comma, "','");
                if (lex_.peek().type != Token::Ident) fail("variable name expected in loc(...)");
                std::string var = lex_.take().text;
                expect(Token::RParen, "')'");
                return Formula::localEq(t, var);
            }
            case Token::Ident:
            case Token::Atom: {
                Token t = lex_.take();
                checkAtom(t.text);
                return Formula::atom(t.text);
            }
            case Token::KwU:
                fail("U must appear inside parentheses: (a U b)");
            default:
                fail("formula expected");
        }
    }

    Lexer lex_;
    const Environment* env_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, const Environment* env) {
    return FormulaParser(text, env).parse();
}

}  // namespace esl
