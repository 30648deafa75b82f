#ifndef DICKE2_TOML_HPP
#define DICKE2_TOML_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dicke2::toml {

/// Minimal TOML-subset reader covering what run configs need:
/// `[table]` headers, `key = value` pairs, strings, integers, floats,
/// booleans, flat arrays of scalars, `#` comments. Keys are flattened to
/// dotted paths ("integrator.rel_tol"). Errors carry line numbers.
struct Value {
    std::variant<std::string, double, int64_t, bool,
                 std::vector<Value>> v;

    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_number() const {
        return std::holds_alternative<double>(v) ||
               std::holds_alternative<int64_t>(v);
    }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_array() const {
        return std::holds_alternative<std::vector<Value>>(v);
    }

    double as_double() const;
    int64_t as_int() const;
    const std::string& as_string() const;
    bool as_bool() const;
    const std::vector<Value>& as_array() const;
};

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
          line(line_) {}
};

class Table {
  public:
    bool contains(const std::string& key) const {
        return values_.count(key) > 0;
    }
    const Value& at(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<int64_t> get_int(const std::string& key) const;
    std::optional<std::string> get_string(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;
    std::optional<std::vector<double>> get_doubles(
        const std::string& key) const;

    void set(const std::string& key, Value v) {
        values_[key] = std::move(v);
    }
    const std::map<std::string, Value>& entries() const { return values_; }

  private:
    std::map<std::string, Value> values_;
};

Table parse(const std::string& text);
Table parse_file(const std::string& path);

}  // namespace dicke2::toml

#endif
