#include "maxjsr/setfile.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "maxjsr/error.hpp"

namespace maxjsr {

namespace {

using ordered_json = nlohmann::ordered_json;

// Forward iterator over the text that remembers how far the JSON lexer has
// read, so SAX events can be mapped back to a line and column.
class TrackingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  TrackingIterator() = default;
  TrackingIterator(const char* p, const char* base, std::size_t* consumed)
      : p_(p), base_(base), consumed_(consumed) {}

  reference operator*() const { return *p_; }
  TrackingIterator& operator++() {
    ++p_;
    const auto offset = static_cast<std::size_t>(p_ - base_);
    if (offset > *consumed_) *consumed_ = offset;
    return *this;
  }
  TrackingIterator operator++(int) {
    TrackingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const TrackingIterator& o) const { return p_ == o.p_; }

 private:
  const char* p_ = nullptr;
  const char* base_ = nullptr;
  std::size_t* consumed_ = nullptr;
};

struct Position {
  std::size_t line = 0;
  std::size_t column = 0;
};

Position position_at(std::string_view text, std::size_t offset) {
  Position pos{1, 1};
  offset = std::min(offset, text.size());
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

// Records the text offset of every value event in document order and
// rejects duplicate keys (ordered_json would otherwise hide them).
class PositionRecorder : public nlohmann::json_sax<ordered_json> {
 public:
  PositionRecorder(std::string_view text, const std::size_t* consumed)
      : text_(text), consumed_(consumed) {}

  std::vector<Position> positions;

  bool null() override { return mark(Token::bare); }
  bool boolean(bool) override { return mark(Token::bare); }
  bool number_integer(number_integer_t) override { return mark(Token::bare); }
  bool number_unsigned(number_unsigned_t) override { return mark(Token::bare); }
  bool number_float(number_float_t, const string_t&) override { return mark(Token::bare); }
  bool string(string_t&) override { return mark(Token::string); }
  bool binary(binary_t&) override { return mark(Token::bare); }
  bool start_object(std::size_t) override {
    keys_.emplace_back();
    return mark(Token::bracket);
  }
  bool key(string_t& k) override {
    if (!keys_.back().insert(k).second) {
      const Position p = position_at(text_, token_start(Token::string));
      throw ParseError("duplicate key \"" + k + "\"", p.line, p.column);
    }
    return true;
  }
  bool end_object() override {
    keys_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override { return mark(Token::bracket); }
  bool end_array() override { return true; }
  bool parse_error(std::size_t byte, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    const Position p = position_at(text_, byte == 0 ? 0 : byte - 1);
    std::string what = ex.what();
    if (const auto colon = what.find(": "); colon != std::string::npos) what = what.substr(colon + 2);
    throw ParseError("malformed JSON: " + what, p.line, p.column);
  }

 private:
  enum class Token { bracket, string, bare };

  // Offset of the first character of the token just lexed.  The lexer has
  // read one character of lookahead past numbers and literals.
  std::size_t token_start(Token kind) const {
    std::size_t i = *consumed_ == 0 ? 0 : std::min(*consumed_ - 1, text_.size() - 1);
    if (kind == Token::bracket) return i;
    if (kind == Token::string) {
      while (i > 0 && text_[i] != '"') --i;
      while (i > 0) {
        --i;
        if (text_[i] == '"' && (i == 0 || text_[i - 1] != '\\')) break;
      }
      return i;
    }
    const auto bare = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '+' || ch == '-'; };
    while (i > 0 && !bare(text_[i])) --i;
    while (i > 0 && bare(text_[i - 1])) --i;
    return i;
  }
  bool mark(Token kind) {
    positions.push_back(position_at(text_, token_start(kind)));
    return true;
  }

  std::string_view text_;
  const std::size_t* consumed_;
  std::vector<std::set<std::string>> keys_;
};

// Walks the DOM in the same pre-order as the SAX events.
class Located {
 public:
  explicit Located(const std::vector<Position>& positions) : positions_(positions) {}

  void assign(const ordered_json& node) {
    where_.emplace(&node, positions_.at(next_++));
    if (node.is_structured())
      for (const auto& child : node) assign(child);
  }
  [[noreturn]] void fail(const ordered_json& node, const std::string& what) const {
    const auto it = where_.find(&node);
    const Position p = it == where_.end() ? Position{} : it->second;
    throw ParseError(what, p.line, p.column);
  }

 private:
  const std::vector<Position>& positions_;
  std::size_t next_ = 0;
  std::map<const ordered_json*, Position> where_;
};

double parse_decimal(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size())
    throw InvalidValueError("not a decimal literal: \"" + std::string(s) + "\"");
  return value;
}

double checked_entry(double value) {
  if (!std::isfinite(value)) throw InvalidValueError("entry is not finite");
  if (value < 0.0) throw InvalidValueError("entry is negative");
  return value;
}

}  // namespace

double parse_entry_literal(std::string_view literal) {
  const auto slash = literal.find('/');
  if (slash == std::string_view::npos) return checked_entry(parse_decimal(literal));
  const double num = parse_decimal(literal.substr(0, slash));
  const double den = parse_decimal(literal.substr(slash + 1));
  if (den == 0.0) throw InvalidValueError("zero denominator in \"" + std::string(literal) + "\"");
  return checked_entry(num / den);
}

MatrixSet parse_set_file(std::string_view text) {
  std::size_t consumed = 0;
  PositionRecorder recorder(text, &consumed);
  const char* base = text.data();
  ordered_json::sax_parse(TrackingIterator(base, base, &consumed),
                          TrackingIterator(base + text.size(), base, &consumed), &recorder);
  const ordered_json doc = ordered_json::parse(text);
  Located loc(recorder.positions);
  loc.assign(doc);

  if (!doc.is_object()) loc.fail(doc, "top level must be an object");
  for (const auto& [key, value] : doc.items())
    if (key != "n" && key != "matrices") loc.fail(value, "unexpected field \"" + key + "\"");
  if (!doc.contains("n")) loc.fail(doc, "missing field \"n\"");
  if (!doc.contains("matrices")) loc.fail(doc, "missing field \"matrices\"");

  const auto& n_node = doc["n"];
  if (!n_node.is_number_unsigned() || n_node.get<std::uint64_t>() == 0)
    loc.fail(n_node, "\"n\" must be a positive integer");
  const auto n = static_cast<std::size_t>(n_node.get<std::uint64_t>());

  const auto& matrices = doc["matrices"];
  if (!matrices.is_array() || matrices.empty())
    loc.fail(matrices, "\"matrices\" must be a nonempty array");

  std::vector<NamedMatrix> members;
  std::set<std::string> names;
  for (const auto& m : matrices) {
    if (!m.is_object()) loc.fail(m, "matrix entries must be objects");
    for (const auto& [key, value] : m.items())
      if (key != "name" && key != "rows") loc.fail(value, "unexpected field \"" + key + "\"");
    if (!m.contains("name") || !m["name"].is_string()) loc.fail(m, "matrix needs a string \"name\"");
    if (!m.contains("rows")) loc.fail(m, "matrix needs \"rows\"");
    const std::string name = m["name"].get<std::string>();
    if (!names.insert(name).second) loc.fail(m["name"], "duplicate matrix name \"" + name + "\"");

    const auto& rows = m["rows"];
    if (!rows.is_array() || rows.size() != n)
      loc.fail(rows, "matrix \"" + name + "\" must have " + std::to_string(n) + " rows");
    std::vector<double> entries;
    entries.reserve(n * n);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != n)
        loc.fail(row, "ragged row in \"" + name + "\": expected " + std::to_string(n) + " entries");
      for (const auto& cell : row) {
        try {
          if (cell.is_number()) {
            entries.push_back(checked_entry(cell.get<double>()));
          } else if (cell.is_string()) {
            entries.push_back(parse_entry_literal(cell.get<std::string>()));
          } else {
            loc.fail(cell, "entries must be numbers or numeric strings");
          }
        } catch (const InvalidValueError& e) {
          loc.fail(cell, std::string(e.what()) + " in \"" + name + "\"");
        }
      }
    }
    members.push_back({name, MaxMatrix(n, std::move(entries))});
  }
  return MatrixSet(std::move(members));
}

MatrixSet load_set_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open \"" + path + "\"", 0, 0);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    return parse_set_file(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0, 0);
  }
}

std::string serialize_set_file(const MatrixSet& psi) {
  std::ostringstream os;
  os << "{\n  \"n\": " << psi.dim() << ",\n  \"matrices\": [\n";
  for (std::size_t m = 0; m < psi.size(); ++m) {
    const auto& member = psi.members()[m];
    os << "    {\n      \"name\": " << ordered_json(member.name).dump() << ",\n      \"rows\": [\n";
    for (std::size_t i = 0; i < psi.dim(); ++i) {
      const auto row = member.matrix.row(i);
      os << "        " << ordered_json(std::vector<double>(row.begin(), row.end())).dump()
         << (i + 1 < psi.dim() ? ",\n" : "\n");
    }
    os << "      ]\n    }" << (m + 1 < psi.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

}  // namespace maxjsr
