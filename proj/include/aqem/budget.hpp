#pragma once

#include <memory>
#include <string>

namespace aqem {

/// A per-rung budget written as an expression in N, e.g. "max(20, 2N)" or
/// "min(10N^2, 100000)". Supports + - * ^, parentheses, max(), min() and
/// implicit multiplication ("10N^2"). Values are rounded to the nearest integer.
class BudgetExpr {
public:
    /// Throws ConfigError on a syntax error.
    explicit BudgetExpr(const std::string& text);

    long long operator()(int n) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

}  // namespace aqem
