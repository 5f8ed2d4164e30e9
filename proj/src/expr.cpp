#include "levidf/expr.hpp"

#include "levidf/report.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace levidf {

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += (i + 1 == expected.size()) ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

std::string format_parse_error(SourcePos pos, const std::string& detail,
                               const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << "parse error at line " << pos.line << ", column " << pos.col << ": " << detail;
  if (!expected.empty()) os << " (expected " << join_expected(expected) << ")";
  return os.str();
}

}  // namespace

ParseError::ParseError(SourcePos pos_, std::string detail_, std::vector<std::string> expected_)
    : std::runtime_error(format_parse_error(pos_, detail_, expected_)),
      pos(pos_),
      detail(std::move(detail_)),
      expected(std::move(expected_)) {}

EvalDomainError::EvalDomainError(SourcePos pos_, const DiffDomainError& cause)
    : std::runtime_error("at line " + std::to_string(pos_.line) + ", column " +
                         std::to_string(pos_.col) + ": " + cause.what()),
      pos(pos_),
      op(cause.op()),
      value(cause.value()) {}

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  SourcePos pos;
  double number = 0.0;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws();
    Token tok;
    tok.pos = pos_;
    if (at_end()) {
      tok.kind = Tok::end;
      return tok;
    }
    const char c = src_[i_];
    switch (c) {
      case '+': advance(); tok.kind = Tok::plus; return tok;
      case '-': advance(); tok.kind = Tok::minus; return tok;
      case '*': advance(); tok.kind = Tok::star; return tok;
      case '/': advance(); tok.kind = Tok::slash; return tok;
      case '^': advance(); tok.kind = Tok::caret; return tok;
      case '(': advance(); tok.kind = Tok::lparen; return tok;
      case ')': advance(); tok.kind = Tok::rparen; return tok;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
      return lex_number(tok);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok.kind = Tok::ident;
      const std::size_t start = i_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
        advance();
      tok.text = std::string(src_.substr(start, i_ - start));
      return tok;
    }
    throw ParseError(tok.pos, std::string("unexpected character '") + c + "'", {});
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }

  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else {
      ++pos_.col;
    }
    ++i_;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance();
  }

  Token lex_number(Token tok) {
    const std::size_t start = i_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
    if (!at_end() && src_[i_] == '.') {
      advance();
      while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
    }
    if (!at_end() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      std::size_t save_i = i_;
      SourcePos save_pos = pos_;
      advance();
      if (!at_end() && (src_[i_] == '+' || src_[i_] == '-')) advance();
      if (!at_end() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
      } else {
        i_ = save_i;  // 'e' was the start of an identifier, not an exponent
        pos_ = save_pos;
      }
    }
    const std::string text(src_.substr(start, i_ - start));
    tok.kind = Tok::number;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, tok.number);
    if (res.ec != std::errc() || res.ptr != last)
      throw ParseError(tok.pos, "malformed numeric literal '" + text + "'", {});
    return tok;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

bool is_func(const std::string& name) {
  return name == "re" || name == "im" || name == "conj" || name == "abs2" ||
         name == "exp" || name == "log" || name == "sqrt";
}

ExprKind func_kind(const std::string& name) {
  if (name == "re") return ExprKind::re;
  if (name == "im") return ExprKind::im;
  if (name == "conj") return ExprKind::conj;
  if (name == "abs2") return ExprKind::abs2;
  if (name == "exp") return ExprKind::exp;
  if (name == "log") return ExprKind::log;
  return ExprKind::sqrt;
}

}  // namespace

class Parser {
 public:
  Parser(std::string_view src, int dimension, ParseOptions opts)
      : lexer_(src), dim_(dimension), opts_(opts) {
    cur_ = lexer_.next();
  }

  Expr run() {
    Expr e;
    e.dim_ = dim_;
    nodes_ = &e.nodes_;
    e.root_ = parse_expr();
    if (cur_.kind != Tok::end)
      throw ParseError(cur_.pos, "trailing input after expression",
                       {"'+'", "'-'", "'*'", "'/'", "end of input"});
    e.uses_t_ = uses_t_;
    return e;
  }

 private:
  int add_node(ExprNode n) {
    nodes_->push_back(n);
    return static_cast<int>(nodes_->size()) - 1;
  }

  void bump() { cur_ = lexer_.next(); }

  int parse_expr() {
    int lhs = parse_term();
    while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
      const bool plus = cur_.kind == Tok::plus;
      const SourcePos pos = cur_.pos;
      bump();
      const int rhs = parse_term();
      lhs = add_node({plus ? ExprKind::add : ExprKind::sub, 0.0, 0, lhs, rhs, pos});
    }
    return lhs;
  }

  int parse_term() {
    int lhs = parse_factor();
    while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
      const bool mul = cur_.kind == Tok::star;
      const SourcePos pos = cur_.pos;
      bump();
      const int rhs = parse_factor();
      lhs = add_node({mul ? ExprKind::mul : ExprKind::div, 0.0, 0, lhs, rhs, pos});
    }
    return lhs;
  }

  // factor := atom ('^' realliteral)?  -- the exponent must be a literal so the
  // power rule stays closed-form under differentiation.
  int parse_factor() {
    const int base = parse_atom();
    if (cur_.kind != Tok::caret) return base;
    const SourcePos pos = cur_.pos;
    bump();
    double sign = 1.0;
    if (cur_.kind == Tok::minus) {
      sign = -1.0;
      bump();
    }
    if (cur_.kind != Tok::number)
      throw ParseError(cur_.pos, "exponent must be a real numeric literal", {"number"});
    const double r = sign * cur_.number;
    bump();
    return add_node({ExprKind::pow, r, 0, base, -1, pos});
  }

  int parse_atom() {
    switch (cur_.kind) {
      case Tok::number: {
        const int n = add_node({ExprKind::constant, cur_.number, 0, -1, -1, cur_.pos});
        bump();
        return n;
      }
      case Tok::minus: {
        const SourcePos pos = cur_.pos;
        bump();
        // '^' binds tighter than unary minus: -z1^2 is -(z1^2).
        const int child = parse_factor();
        return add_node({ExprKind::neg, 0.0, 0, child, -1, pos});
      }
      case Tok::lparen: {
        bump();
        const int inner = parse_expr();
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::ident:
        return parse_ident();
      default:
        throw ParseError(cur_.pos, "expected an operand", expected_atom());
    }
  }

  int parse_ident() {
    const Token tok = cur_;
    bump();
    if (tok.text.size() == 2 && tok.text[0] == 'z' && tok.text[1] >= '1' && tok.text[1] <= '9') {
      const int index = tok.text[1] - '0';
      if (index > dim_)
        throw ParseError(tok.pos,
                         "variable " + tok.text + " out of range for dimension " +
                             std::to_string(dim_),
                         {});
      return add_node({ExprKind::var, 0.0, index, -1, -1, tok.pos});
    }
    if (tok.text == "t") {
      if (!opts_.allow_t)
        throw ParseError(tok.pos, "'t' is only available in chart expressions", {});
      uses_t_ = true;
      return add_node({ExprKind::var_t, 0.0, 0, -1, -1, tok.pos});
    }
    if (tok.text == "i") {
      if (!opts_.allow_imag_unit)
        throw ParseError(tok.pos, "'i' is only available in chart expressions", {});
      return add_node({ExprKind::imag_unit, 0.0, 0, -1, -1, tok.pos});
    }
    if (is_func(tok.text)) {
      expect(Tok::lparen, "'('");
      const int arg = parse_expr();
      expect(Tok::rparen, "')'");
      return add_node({func_kind(tok.text), 0.0, 0, arg, -1, tok.pos});
    }
    throw ParseError(tok.pos, "unknown identifier '" + tok.text + "'", {});
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind)
      throw ParseError(cur_.pos, std::string("expected ") + what, {what});
    bump();
  }

  std::vector<std::string> expected_atom() const {
    std::vector<std::string> e = {"number", "identifier", "'('", "'-'"};
    return e;
  }

  Lexer lexer_;
  Token cur_;
  int dim_;
  ParseOptions opts_;
  std::vector<ExprNode>* nodes_ = nullptr;
  bool uses_t_ = false;
};

Expr Expr::parse(std::string_view source, int dimension, ParseOptions opts) {
  if (dimension < 0 || dimension > 9)
    throw std::invalid_argument("Expr::parse: dimension must be in [0, 9]");
  Parser p(source, dimension, opts);
  return p.run();
}

namespace {

const char* func_name(ExprKind k) {
  switch (k) {
    case ExprKind::re: return "re";
    case ExprKind::im: return "im";
    case ExprKind::conj: return "conj";
    case ExprKind::abs2: return "abs2";
    case ExprKind::exp: return "exp";
    case ExprKind::log: return "log";
    case ExprKind::sqrt: return "sqrt";
    default: return "?";
  }
}

// Grammar slots: 1 = expr (additive), 2 = term (multiplicative), 3 = factor,
// 4 = atom. A node prints bare when its own level is >= the slot it occupies.
int level(ExprKind k) {
  switch (k) {
    case ExprKind::add:
    case ExprKind::sub: return 1;
    case ExprKind::mul:
    case ExprKind::div: return 2;
    case ExprKind::pow: return 3;
    case ExprKind::neg: return 4;  // '-' factor is itself an atom
    default: return 5;
  }
}

}  // namespace

std::string Expr::pretty() const {
  std::string out;
  // Recursion over the arena; `slot` is the grammar slot the node lands in.
  auto rec = [&](auto&& self, int idx, int slot) -> void {
    const ExprNode& n = nodes_[static_cast<std::size_t>(idx)];
    const bool parens = level(n.kind) < slot;
    if (parens) out += '(';
    switch (n.kind) {
      case ExprKind::constant: out += fmt_double(n.number); break;
      case ExprKind::imag_unit: out += 'i'; break;
      case ExprKind::var: out += 'z'; out += static_cast<char>('0' + n.var); break;
      case ExprKind::var_t: out += 't'; break;
      case ExprKind::re:
      case ExprKind::im:
      case ExprKind::conj:
      case ExprKind::abs2:
      case ExprKind::exp:
      case ExprKind::log:
      case ExprKind::sqrt:
        out += func_name(n.kind);
        out += '(';
        self(self, n.a, 1);
        out += ')';
        break;
      case ExprKind::neg:
        out += '-';
        self(self, n.a, 3);
        break;
      case ExprKind::add:
      case ExprKind::sub:
        self(self, n.a, 1);
        out += (n.kind == ExprKind::add) ? " + " : " - ";
        self(self, n.b, 2);
        break;
      case ExprKind::mul:
      case ExprKind::div:
        self(self, n.a, 2);
        out += (n.kind == ExprKind::mul) ? "*" : "/";
        self(self, n.b, 3);
        break;
      case ExprKind::pow:
        self(self, n.a, 5);  // pow base must be a bare atom
        out += '^';
        out += fmt_double(n.number);
        break;
    }
    if (parens) out += ')';
  };
  if (root_ >= 0) rec(rec, root_, 1);
  return out;
}

}  // namespace levidf
