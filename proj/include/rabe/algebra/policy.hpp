#pragma once

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rabe/bytes.hpp"
#include "rabe/error.hpp"

namespace rabe::algebra {

using AttributeSet = std::set<std::string>;

// Monotone boolean formula with binary AND/OR gates over attribute leaves.
// Immutable; subtrees are shared between copies.
class Policy {
public:
    enum class Gate : std::uint8_t { leaf = 1, all = 2, any = 3 };

    static Policy leaf(std::string attribute) {
        if (!valid_identifier(attribute)) throw PolicyError("invalid attribute name '" + attribute + "'");
        return Policy(std::make_shared<const Node>(Node{Gate::leaf, std::move(attribute), {}, {}}));
    }
    static Policy conj(const Policy& l, const Policy& r) {
        return Policy(std::make_shared<const Node>(Node{Gate::all, {}, l.root_, r.root_}));
    }
    static Policy disj(const Policy& l, const Policy& r) {
        return Policy(std::make_shared<const Node>(Node{Gate::any, {}, l.root_, r.root_}));
    }

    // Grammar (AND binds tighter than OR, both left-associative):
    //   expr   := term ('or' term)*
    //   term   := factor ('and' factor)*
    //   factor := IDENT | '(' expr ')'
    static Policy parse(std::string_view text);

    Gate gate() const { return root_->gate; }
    const std::string& attribute() const { return root_->attribute; }
    Policy left() const { return Policy(root_->left); }
    Policy right() const { return Policy(root_->right); }

    bool satisfied_by(const AttributeSet& attrs) const { return eval(*root_, attrs); }

    // Leaves in left-to-right order; this is the LSSS row order.
    std::vector<std::string> leaves() const {
        std::vector<std::string> out;
        collect(*root_, out);
        return out;
    }

    std::string to_string() const {
        std::string out;
        render(*root_, out, true);
        return out;
    }

    // Postfix token stream: leaf = 0x01 name, and = 0x02, or = 0x03.
    void encode(Writer& w) const {
        std::vector<const Node*> tokens;
        postfix(*root_, tokens);
        w.u32(static_cast<std::uint32_t>(tokens.size()));
        for (const auto* n : tokens) {
            w.u8(static_cast<std::uint8_t>(n->gate));
            if (n->gate == Gate::leaf) w.str(n->attribute);
        }
    }

    static Policy decode(Reader& r) {
        auto count = r.count();
        std::vector<Policy> stack;
        for (std::size_t i = 0; i < count; ++i) {
            auto tag = r.u8();
            if (tag == static_cast<std::uint8_t>(Gate::leaf)) {
                try {
                    stack.push_back(leaf(r.str()));
                } catch (const PolicyError& e) {
                    throw DecodeError(e.what());
                }
                continue;
            }
            if (tag != static_cast<std::uint8_t>(Gate::all) && tag != static_cast<std::uint8_t>(Gate::any))
                throw DecodeError("unknown policy token");
            if (stack.size() < 2) throw DecodeError("policy gate without two operands");
            auto rhs = stack.back();
            stack.pop_back();
            auto lhs = stack.back();
            stack.pop_back();
            stack.push_back(tag == static_cast<std::uint8_t>(Gate::all) ? conj(lhs, rhs) : disj(lhs, rhs));
        }
        if (stack.size() != 1) throw DecodeError("malformed policy token stream");
        return stack.front();
    }

    friend bool operator==(const Policy& a, const Policy& b) { return same(*a.root_, *b.root_); }

    static bool valid_identifier(std::string_view s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
        return true;
    }

private:
    struct Node {
        Gate gate;
        std::string attribute;
        std::shared_ptr<const Node> left, right;
    };

    explicit Policy(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    static bool eval(const Node& n, const AttributeSet& attrs) {
        switch (n.gate) {
            case Gate::leaf: return attrs.contains(n.attribute);
            case Gate::all: return eval(*n.left, attrs) && eval(*n.right, attrs);
            case Gate::any: return eval(*n.left, attrs) || eval(*n.right, attrs);
        }
        return false;
    }

    static void collect(const Node& n, std::vector<std::string>& out) {
        if (n.gate == Gate::leaf) {
            out.push_back(n.attribute);
            return;
        }
        collect(*n.left, out);
        collect(*n.right, out);
    }

    static void postfix(const Node& n, std::vector<const Node*>& out) {
        if (n.gate != Gate::leaf) {
            postfix(*n.left, out);
            postfix(*n.right, out);
        }
        out.push_back(&n);
    }

    static void render(const Node& n, std::string& out, bool top) {
        if (n.gate == Gate::leaf) {
            out += n.attribute;
            return;
        }
        if (!top) out += '(';
        render(*n.left, out, false);
        out += n.gate == Gate::all ? " and " : " or ";
        render(*n.right, out, false);
        if (!top) out += ')';
    }

    static bool same(const Node& a, const Node& b) {
        if (a.gate != b.gate) return false;
        if (a.gate == Gate::leaf) return a.attribute == b.attribute;
        return same(*a.left, *b.left) && same(*a.right, *b.right);
    }

    std::shared_ptr<const Node> root_;
};

namespace detail {

class PolicyParser {
public:
    explicit PolicyParser(std::string_view text) : text_(text) { advance(); }

    Policy run() {
        if (kind_ == Tok::end) throw PolicyError("empty policy");
        auto p = expr();
        if (kind_ != Tok::end) throw PolicyError("unexpected token '" + std::string(lexeme_) + "'");
        return p;
    }

private:
    enum class Tok { ident, kw_and, kw_or, lparen, rparen, end };

    Policy expr() {
        auto lhs = term();
        while (kind_ == Tok::kw_or) {
            advance();
            lhs = Policy::disj(lhs, term());
        }
        return lhs;
    }

    Policy term() {
        auto lhs = factor();
        while (kind_ == Tok::kw_and) {
            advance();
            lhs = Policy::conj(lhs, factor());
        }
        return lhs;
    }

    Policy factor() {
        if (kind_ == Tok::ident) {
            auto leaf = Policy::leaf(std::string(lexeme_));
            advance();
            return leaf;
        }
        if (kind_ == Tok::lparen) {
            advance();
            auto inner = expr();
            if (kind_ != Tok::rparen) throw PolicyError("missing ')'");
            advance();
            return inner;
        }
        throw PolicyError(kind_ == Tok::end ? "unexpected end of policy" : "unexpected token '" + std::string(lexeme_) + "'");
    }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ >= text_.size()) {
            kind_ = Tok::end;
            lexeme_ = {};
            return;
        }
        char c = text_[pos_];
        if (c == '(' || c == ')') {
            kind_ = c == '(' ? Tok::lparen : Tok::rparen;
            lexeme_ = text_.substr(pos_++, 1);
            return;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) throw PolicyError(std::string("invalid character '") + c + "' in policy");
        lexeme_ = text_.substr(start, pos_ - start);
        if (lexeme_ == "and" || lexeme_ == "AND")
            kind_ = Tok::kw_and;
        else if (lexeme_ == "or" || lexeme_ == "OR")
            kind_ = Tok::kw_or;
        else
            kind_ = Tok::ident;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Tok kind_ = Tok::end;
    std::string_view lexeme_;
};

}  // namespace detail

inline Policy Policy::parse(std::string_view text) { return detail::PolicyParser(text).run(); }

}  // namespace rabe::algebra
