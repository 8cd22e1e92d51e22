#include "modop/dsl.hpp"

#include <cctype>
#include <sstream>

#include "modop/error.hpp"

namespace modop::dsl {

namespace {

struct Token {
    enum Kind { Ident, Number, Open, Close, Comma, End } kind;
    std::string text;
    double value = 0.0;
};

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == ':') {
            ++i;
        } else if (c == '(') {
            out.push_back({Token::Open, "(", 0.0});
            ++i;
        } else if (c == ')') {
            out.push_back({Token::Close, ")", 0.0});
            ++i;
        } else if (c == ',') {
            out.push_back({Token::Comma, ",", 0.0});
            ++i;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '<') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '<' ||
                                      src[j] == '>' || src[j] == '^')) {
                ++j;
            }
            out.push_back({Token::Ident, src.substr(i, j - i), 0.0});
            i = j;
        } else {
            std::size_t j = i;
            while (j < src.size() && !std::isspace(static_cast<unsigned char>(src[j])) && src[j] != ',' &&
                   src[j] != ')' && src[j] != '(' && src[j] != ':') {
                ++j;
            }
            const std::string num = src.substr(i, j - i);
            double v = 0.0;
            try {
                std::size_t used = 0;
                v = std::stod(num, &used);
                if (used != num.size()) throw std::invalid_argument(num);
            } catch (const std::exception&) {
                throw InvalidArgument("expression '" + src + "': cannot read '" + num + "' as a number");
            }
            out.push_back({Token::Number, num, v});
            i = j;
        }
    }
    out.push_back({Token::End, "", 0.0});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const std::string& src) : tokens_(std::move(tokens)), src_(src) {}

    Node expr() {
        const Token& t = next();
        if (t.kind != Token::Ident) fail("expected a name");
        Node node{t.text, {}, {}};
        if (peek().kind == Token::Open) {
            next();
            if (peek().kind == Token::Close) fail("empty argument list");
            while (true) {
                if (peek().kind == Token::Number) {
                    node.numbers.push_back(next().value);
                } else {
                    node.children.push_back(expr());
                }
                if (peek().kind == Token::Comma) {
                    next();
                    continue;
                }
                if (next().kind != Token::Close) fail("expected ')' or ','");
                break;
            }
        } else {
            while (peek().kind == Token::Number) node.numbers.push_back(next().value);
        }
        return node;
    }

    void finish() {
        if (peek().kind != Token::End) fail("unexpected trailing input '" + peek().text + "'");
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (t.kind != Token::End) ++pos_;
        return t;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw InvalidArgument("expression '" + src_ + "': " + what);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::string src_;
};

}  // namespace

Node parse(const std::string& text) {
    Parser p(tokenize(text), text);
    Node n = p.expr();
    p.finish();
    return n;
}

std::string to_string(const Node& node) {
    std::ostringstream os;
    os.precision(17);
    os << node.name;
    if (!node.children.empty()) {
        os << "(";
        bool first = true;
        for (double v : node.numbers) {
            os << (first ? "" : ", ") << v;
            first = false;
        }
        for (const auto& c : node.children) {
            os << (first ? "" : ", ") << to_string(c);
            first = false;
        }
        os << ")";
    } else {
        for (double v : node.numbers) os << " " << v;
    }
    return os.str();
}

}  // namespace modop::dsl
