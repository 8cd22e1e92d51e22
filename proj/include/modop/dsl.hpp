#pragma once

#include <string>
#include <vector>

namespace modop::dsl {

// Parsed prefix expression: `name arg arg ...` or `name(child, child, ...)`.
// Colons are read as spaces, so `poly:3` == `poly 3`.
struct Node {
    std::string name;
    std::vector<double> numbers;
    std::vector<Node> children;
};

Node parse(const std::string& text);

// Inverse of parse (normalized spacing).
std::string to_string(const Node& node);

}  // namespace modop::dsl
