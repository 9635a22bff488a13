#include "berry/expression.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "berry/errors.hpp"

namespace berry {

struct Expression::Node {
  enum class Kind { Constant, Parameter, Unary, Binary, Call } kind;
  double value = 0.0;                 // Constant
  int param_index = -1;               // Parameter
  char op = 0;                        // Unary ('-') / Binary (+ - * / ^)
  double (*func)(double) = nullptr;   // Call
  std::shared_ptr<const Node> lhs, rhs;

  double eval(const ParameterPoint& p) const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::Parameter: return p[param_index];
      case Kind::Unary: return -lhs->eval(p);
      case Kind::Call: return func(lhs->eval(p));
      case Kind::Binary: {
        const double a = lhs->eval(p);
        const double b = rhs->eval(p);
        switch (op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          default: return std::pow(a, b);
        }
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make_constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->value = v;
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& params)
      : text_(text), params_(params) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression",
                      msg + " at position " + std::to_string(pos_) + " in '" +
                          text_ + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(
                                      static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Binary;
      n->op = c;
      n->lhs = lhs;
      n->rhs = term();
      lhs = n;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (true) {
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Binary;
      n->op = c;
      n->lhs = lhs;
      n->rhs = factor();
      lhs = n;
    }
  }

  // Unary minus binds looser than '^', so -x^2 means -(x^2); the exponent
  // itself may carry a sign, so 2^-3 parses as 2^(-3).
  NodePtr factor() {
    if (consume('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->op = '-';
      n->lhs = factor();
      return n;
    }
    NodePtr base = primary();
    if (peek() == '^') {
      ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Binary;
      n->op = '^';
      n->lhs = base;
      n->rhs = factor();  // right-associative
      return n;
    }
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return identifier();
    }
    fail("unexpected character");
  }

  NodePtr number() {
    std::size_t end = pos_;
    const char* begin = text_.c_str() + pos_;
    char* after = nullptr;
    const double v = std::strtod(begin, &after);
    if (after == begin) fail("bad number");
    end = pos_ + (after - begin);
    pos_ = end;
    return make_constant(v);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "pi") return make_constant(std::numbers::pi);

    static const std::pair<const char*, double (*)(double)> functions[] = {
        {"sin", std::sin}, {"cos", std::cos},   {"tan", std::tan},
        {"exp", std::exp}, {"log", std::log},   {"sqrt", std::sqrt},
        {"abs", std::fabs}};
    for (const auto& [fname, fptr] : functions) {
      if (name == fname) {
        if (!consume('(')) fail("expected '(' after " + name);
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Call;
        n->func = fptr;
        n->lhs = expr();
        if (!consume(')')) fail("expected ')'");
        return n;
      }
    }
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (params_[i] == name) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Parameter;
        n->param_index = static_cast<int>(i);
        return n;
      }
    }
    fail("unknown identifier '" + name + "'");
  }

  const std::string& text_;
  const std::vector<std::string>& params_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string text, std::shared_ptr<const Node> root)
    : text_(std::move(text)), root_(std::move(root)) {}

Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;
Expression::~Expression() = default;

Expression Expression::parse(const std::string& text,
                             const std::vector<std::string>& parameters) {
  return Expression(text, Parser(text, parameters).parse());
}

double Expression::evaluate(const ParameterPoint& point) const {
  return root_->eval(point);
}

namespace {

std::string strip_comment(const std::string& line) {
  const std::size_t hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace

HamiltonianFamily parse_family_text(const std::string& text,
                                    const std::string& name) {
  std::vector<std::string> params;
  int dim = 0;
  struct Term {
    Expression coefficient;
    Matrix matrix;
  };
  std::vector<Term> terms;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  // Numeric scanner shared by matrix-entry parsing: entries may continue
  // across lines.
  std::vector<double> pending_numbers;
  std::string pending_expr;
  auto flush_term = [&]() {
    if (pending_expr.empty()) return;
    if (dim == 0) {
      throw ConfigError("family-file", "'dim' must come before 'term'");
    }
    if (static_cast<int>(pending_numbers.size()) != 2 * dim * dim) {
      throw ConfigError(
          "family-file",
          "term '" + pending_expr + "' has " +
              std::to_string(pending_numbers.size() / 2) +
              " complex entries, expected " + std::to_string(dim * dim));
    }
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        const std::size_t base = 2 * (i * dim + j);
        m(i, j) = Complex(pending_numbers[base], pending_numbers[base + 1]);
      }
    }
    if (hermiticity_defect(m) > 1e-12) {
      throw ConfigError("family-file",
                        "term '" + pending_expr + "' matrix is not Hermitian");
    }
    terms.push_back({Expression::parse(pending_expr, params), std::move(m)});
    pending_expr.clear();
    pending_numbers.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(strip_comment(line));
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "params") {
      flush_term();
      params.clear();
      std::string p;
      while (ls >> p) params.push_back(p);
      if (params.empty()) {
        throw ConfigError("family-file", "line " + std::to_string(line_no) +
                                             ": 'params' needs names");
      }
    } else if (word == "dim") {
      flush_term();
      if (!(ls >> dim) || dim < 1 || dim > kMaxMatrixDim) {
        throw ConfigError("family-file", "line " + std::to_string(line_no) +
                                             ": bad 'dim'");
      }
    } else if (word == "term") {
      flush_term();
      std::getline(ls, pending_expr);
      if (pending_expr.find_first_not_of(" \t") == std::string::npos) {
        throw ConfigError("family-file", "line " + std::to_string(line_no) +
                                             ": 'term' needs an expression");
      }
    } else {
      // Matrix entry continuation: every token must be a number.
      std::istringstream nums(strip_comment(line));
      double v;
      while (nums >> v) pending_numbers.push_back(v);
      if (!nums.eof()) {
        throw ConfigError("family-file", "line " + std::to_string(line_no) +
                                             ": expected numeric entries");
      }
      if (pending_expr.empty()) {
        throw ConfigError("family-file",
                          "line " + std::to_string(line_no) +
                              ": matrix entries outside a 'term' block");
      }
    }
  }
  flush_term();

  if (params.empty()) {
    throw ConfigError("family-file", "missing 'params' line");
  }
  if (terms.empty()) {
    throw ConfigError("family-file", "no 'term' blocks found");
  }

  auto shared_terms = std::make_shared<std::vector<Term>>(std::move(terms));
  const int d = dim;
  return HamiltonianFamily(
      d, static_cast<int>(params.size()),
      [shared_terms, d](const ParameterPoint& p) -> Matrix {
        Matrix h = Matrix::Zero(d, d);
        for (const Term& t : *shared_terms) {
          h += t.coefficient.evaluate(p) * t.matrix;
        }
        return h;
      },
      nullptr, name);
}

HamiltonianFamily load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("family-file", "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_family_text(buffer.str(), path);
}

}  // namespace berry
