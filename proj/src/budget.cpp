#include "aqem/budget.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "aqem/errors.hpp"

namespace aqem {

struct BudgetExpr::Node {
    enum class Kind { Number, N, Add, Sub, Mul, Pow, Neg, Max, Min } kind = Kind::Number;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(double n) const {
        switch (kind) {
            case Kind::Number:
                return value;
            case Kind::N:
                return n;
            case Kind::Add:
                return lhs->eval(n) + rhs->eval(n);
            case Kind::Sub:
                return lhs->eval(n) - rhs->eval(n);
            case Kind::Mul:
                return lhs->eval(n) * rhs->eval(n);
            case Kind::Pow:
                return std::pow(lhs->eval(n), rhs->eval(n));
            case Kind::Neg:
                return -lhs->eval(n);
            case Kind::Max:
                return std::max(lhs->eval(n), rhs->eval(n));
            case Kind::Min:
                return std::min(lhs->eval(n), rhs->eval(n));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const BudgetExpr::Node>;
using Kind = BudgetExpr::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
    auto node = std::make_shared<BudgetExpr::Node>();
    node->kind = kind;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    node->value = value;
    return node;
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr parse() {
        NodePtr node = sum();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return node;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("budget expression '" + text_ + "': " + what);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    bool starts_factor() {
        skip_space();
        if (pos_ >= text_.size()) {
            return false;
        }
        const char c = text_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'N' || c == 'n' || c == '(' ||
               text_.compare(pos_, 3, "max") == 0 || text_.compare(pos_, 3, "min") == 0;
    }

    NodePtr sum() {
        NodePtr node = product();
        for (;;) {
            if (accept('+')) {
                node = make(Kind::Add, node, product());
            } else if (accept('-')) {
                node = make(Kind::Sub, node, product());
            } else {
                return node;
            }
        }
    }

    NodePtr product() {
        NodePtr node = unary();
        for (;;) {
            if (accept('*')) {
                node = make(Kind::Mul, node, unary());
            } else if (starts_factor()) {
                node = make(Kind::Mul, node, unary());
            } else {
                return node;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            return make(Kind::Neg, unary());
        }
        NodePtr base = primary();
        if (accept('^')) {
            return make(Kind::Pow, base, primary());
        }
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = text_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            pos_ += static_cast<std::size_t>(end - begin);
            return make(Kind::Number, nullptr, nullptr, v);
        }
        if (c == 'N' || c == 'n') {
            ++pos_;
            return make(Kind::N);
        }
        if (text_.compare(pos_, 3, "max") == 0 || text_.compare(pos_, 3, "min") == 0) {
            const Kind kind = text_.compare(pos_, 3, "max") == 0 ? Kind::Max : Kind::Min;
            pos_ += 3;
            expect('(');
            NodePtr a = sum();
            expect(',');
            NodePtr b = sum();
            expect(')');
            return make(kind, a, b);
        }
        if (accept('(')) {
            NodePtr inner = sum();
            expect(')');
            return inner;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

BudgetExpr::BudgetExpr(const std::string& text) : text_(text), root_(Parser(text).parse()) {}

long long BudgetExpr::operator()(int n) const {
    return std::llround(root_->eval(static_cast<double>(n)));
}

}  // namespace aqem
