#include "moa/parse.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace moa {

namespace {

enum class Tok { Ident, Number, LParen, RParen, Comma, Lt, Gt, Plus, Minus, Star, Slash, End };

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& why) const { throw ParseError(why, current_.pos); }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        current_.pos = pos_;
        current_.text.clear();
        if (pos_ >= text_.size()) {
            current_.kind = Tok::End;
            return;
        }
        const char c = text_[pos_];
        switch (c) {
            case '(': current_.kind = Tok::LParen; ++pos_; return;
            case ')': current_.kind = Tok::RParen; ++pos_; return;
            case ',': current_.kind = Tok::Comma; ++pos_; return;
            case '<': current_.kind = Tok::Lt; ++pos_; return;
            case '>': current_.kind = Tok::Gt; ++pos_; return;
            case '+': current_.kind = Tok::Plus; ++pos_; return;
            case '-': current_.kind = Tok::Minus; ++pos_; return;
            case '*': current_.kind = Tok::Star; ++pos_; return;
            case '/': current_.kind = Tok::Slash; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = text_.data() + pos_;
            const char* end = text_.data() + text_.size();
            double value = 0.0;
            auto res = std::from_chars(begin, end, value);
            if (res.ec != std::errc{}) {
                throw ParseError("malformed number", pos_);
            }
            current_.kind = Tok::Number;
            current_.number = value;
            current_.text.assign(begin, res.ptr);
            pos_ += static_cast<std::size_t>(res.ptr - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            current_.kind = Tok::Ident;
            current_.text = std::string(text_.substr(start, pos_ - start));
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_;
};

class Parser {
public:
    Parser(std::string_view text, const DeclTable& decls) : lex_(text), decls_(decls) {}

    ExprPtr parse() {
        ExprPtr e = parse_chain();
        if (lex_.peek().kind != Tok::End) {
            lex_.fail("trailing input after expression");
        }
        return e;
    }

private:
    std::optional<PointwiseOp> peek_binop() {
        switch (lex_.peek().kind) {
            case Tok::Plus: return PointwiseOp::Add;
            case Tok::Minus: return PointwiseOp::Sub;
            case Tok::Star: return PointwiseOp::Mul;
            case Tok::Slash: return PointwiseOp::Div;
            default: return std::nullopt;
        }
    }

    // chain := atom (binop chain)? -- right-to-left, no precedence
    ExprPtr parse_chain() {
        ExprPtr lhs = parse_atom();
        if (auto op = peek_binop()) {
            lex_.next();
            return pointwise(*op, std::move(lhs), parse_chain());
        }
        return lhs;
    }

    ExprPtr parse_atom() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::LParen: {
                lex_.next();
                ExprPtr e = parse_chain();
                expect(Tok::RParen, "expected ')'");
                return e;
            }
            case Tok::Minus: {
                lex_.next();
                if (lex_.peek().kind != Tok::Number) {
                    lex_.fail("expected number after unary '-'");
                }
                return scalar_literal(-lex_.next().number);
            }
            case Tok::Number:
                return scalar_literal(lex_.next().number);
            case Tok::Lt:
                return parse_index();
            case Tok::Ident:
                break;
            default:
                lex_.fail("expected an expression atom");
        }

        Token ident = lex_.next();
        if (ident.text == "psi") {
            expect(Tok::LParen, "expected '(' after psi");
            ExprPtr index = parse_index();
            expect(Tok::Comma, "expected ',' in psi");
            ExprPtr array = parse_chain();
            expect(Tok::RParen, "expected ')' after psi arguments");
            return psi(std::move(index), std::move(array));
        }
        if (ident.text == "ip") {
            expect(Tok::LParen, "expected '(' after ip");
            ExprPtr lhs = parse_chain();
            expect(Tok::Comma, "expected ',' in ip");
            ExprPtr rhs = parse_chain();
            expect(Tok::RParen, "expected ')' after ip arguments");
            return inner_product(std::move(lhs), std::move(rhs));
        }
        if (ident.text == "red") {
            expect(Tok::LParen, "expected '(' after red");
            ExprPtr inner = parse_chain();
            expect(Tok::RParen, "expected ')' after red argument");
            return reduce_add(std::move(inner));
        }
        if (ident.text == "tr") {
            return transpose(parse_atom());
        }
        auto it = decls_.find(ident.text);
        if (it == decls_.end()) {
            throw UnknownIdentifierError("unknown identifier '" + ident.text + "'", ident.pos);
        }
        return array_ref(ident.text, it->second);
    }

    // index := '<' (int | 'i' | 'i+1')* '>'
    ExprPtr parse_index() {
        expect(Tok::Lt, "expected '<'");
        SymIndex components;
        while (lex_.peek().kind != Tok::Gt) {
            switch (lex_.peek().kind) {
                case Tok::Number:
                    components.push_back(IndexComponent::constant(take_int()));
                    break;
                case Tok::Minus: {
                    lex_.next();
                    components.push_back(IndexComponent::constant(-take_int()));
                    break;
                }
                case Tok::Ident: {
                    Token ident = lex_.next();
                    if (ident.text != "i") {
                        throw ParseError("only the temporal symbol 'i' may appear in an index", ident.pos);
                    }
                    std::int64_t offset = 0;
                    if (lex_.peek().kind == Tok::Plus) {
                        lex_.next();
                        offset = take_int();
                    }
                    components.push_back(IndexComponent::iter(offset));
                    break;
                }
                default:
                    lex_.fail("expected an index component or '>'");
            }
        }
        lex_.next();
        return index_literal(std::move(components));
    }

    std::int64_t take_int() {
        if (lex_.peek().kind != Tok::Number) {
            lex_.fail("expected an integer");
        }
        Token t = lex_.next();
        auto value = static_cast<std::int64_t>(t.number);
        if (static_cast<double>(value) != t.number) {
            throw ParseError("expected an integer, got " + t.text, t.pos);
        }
        return value;
    }

    void expect(Tok kind, const char* message) {
        if (lex_.peek().kind != kind) {
            lex_.fail(message);
        }
        lex_.next();
    }

    Lexer lex_;
    const DeclTable& decls_;
};

}  // namespace

ExprPtr parse_expr(std::string_view text, const DeclTable& decls) {
    return Parser(text, decls).parse();
}

SymShape parse_dims(std::string_view dims) {
    SymShape out;
    std::size_t start = 0;
    while (start <= dims.size()) {
        std::size_t end = dims.find(',', start);
        if (end == std::string_view::npos) end = dims.size();
        std::string_view piece = dims.substr(start, end - start);
        if (piece == "n") {
            out.push_back(SymExtent::n());
        } else {
            std::int64_t value = 0;
            auto res = std::from_chars(piece.data(), piece.data() + piece.size(), value);
            if (res.ec != std::errc{} || res.ptr != piece.data() + piece.size()) {
                throw ParseError("bad dimension '" + std::string(piece) + "' (use an integer or n)", start);
            }
            out.push_back(SymExtent(value));
        }
        if (end == dims.size()) break;
        start = end + 1;
    }
    return out;
}

}  // namespace moa
