#include "dicke2/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace dicke2::toml {

double Value::as_double() const {
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    if (std::holds_alternative<int64_t>(v))
        return static_cast<double>(std::get<int64_t>(v));
    throw std::runtime_error("TOML value is not a number");
}

int64_t Value::as_int() const {
    if (std::holds_alternative<int64_t>(v)) return std::get<int64_t>(v);
    throw std::runtime_error("TOML value is not an integer");
}

const std::string& Value::as_string() const {
    if (std::holds_alternative<std::string>(v))
        return std::get<std::string>(v);
    throw std::runtime_error("TOML value is not a string");
}

bool Value::as_bool() const {
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
    throw std::runtime_error("TOML value is not a boolean");
}

const std::vector<Value>& Value::as_array() const {
    if (std::holds_alternative<std::vector<Value>>(v))
        return std::get<std::vector<Value>>(v);
    throw std::runtime_error("TOML value is not an array");
}

const Value& Table::at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw std::runtime_error("missing config key: " + key);
    return it->second;
}

std::optional<double> Table::get_double(const std::string& key) const {
    if (!contains(key)) return std::nullopt;
    return at(key).as_double();
}

std::optional<int64_t> Table::get_int(const std::string& key) const {
    if (!contains(key)) return std::nullopt;
    return at(key).as_int();
}

std::optional<std::string> Table::get_string(const std::string& key) const {
    if (!contains(key)) return std::nullopt;
    return at(key).as_string();
}

std::optional<bool> Table::get_bool(const std::string& key) const {
    if (!contains(key)) return std::nullopt;
    return at(key).as_bool();
}

std::optional<std::vector<double>> Table::get_doubles(
    const std::string& key) const {
    if (!contains(key)) return std::nullopt;
    std::vector<double> out;
    for (const auto& item : at(key).as_array()) out.push_back(item.as_double());
    return out;
}

namespace {

struct Cursor {
    const std::string& s;
    size_t pos = 0;
    int line;

    void skip_space() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool done() const { return pos >= s.size(); }
    char peek() const { return pos < s.size() ? s[pos] : '\0'; }
};

Value parse_scalar(Cursor& c);

Value parse_array(Cursor& c) {
    ++c.pos;  // '['
    std::vector<Value> items;
    for (;;) {
        c.skip_space();
        if (c.peek() == ']') {
            ++c.pos;
            break;
        }
        items.push_back(parse_scalar(c));
        c.skip_space();
        if (c.peek() == ',') {
            ++c.pos;
            continue;
        }
        if (c.peek() == ']') {
            ++c.pos;
            break;
        }
        throw ParseError(c.line, "expected ',' or ']' in array");
    }
    return Value{std::move(items)};
}

Value parse_string(Cursor& c) {
    ++c.pos;  // opening quote
    std::string out;
    while (!c.done() && c.peek() != '"') {
        char ch = c.s[c.pos++];
        if (ch == '\\' && !c.done()) {
            const char esc = c.s[c.pos++];
            switch (esc) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default:
                    throw ParseError(c.line, std::string("bad escape \\") + esc);
            }
        } else
            out += ch;
    }
    if (c.done()) throw ParseError(c.line, "unterminated string");
    ++c.pos;  // closing quote
    return Value{std::move(out)};
}

Value parse_scalar(Cursor& c) {
    c.skip_space();
    if (c.done()) throw ParseError(c.line, "expected a value");
    const char ch = c.peek();
    if (ch == '"') return parse_string(c);
    if (ch == '[') return parse_array(c);

    size_t end = c.pos;
    while (end < c.s.size() && c.s[end] != ',' && c.s[end] != ']' &&
           c.s[end] != '#' && c.s[end] != ' ' && c.s[end] != '\t')
        ++end;
    std::string tok = c.s.substr(c.pos, end - c.pos);
    c.pos = end;
    if (tok.empty()) throw ParseError(c.line, "expected a value");
    if (tok == "true") return Value{true};
    if (tok == "false") return Value{false};
    if (tok == "inf") return Value{std::numeric_limits<double>::infinity()};
    if (tok == "-inf") return Value{-std::numeric_limits<double>::infinity()};

    const bool looks_int =
        tok.find_first_of(".eE") == std::string::npos && tok != "-" &&
        tok.find_first_not_of("+-0123456789_") == std::string::npos;
    std::string digits;
    for (char d : tok)
        if (d != '_') digits += d;
    if (looks_int) {
        int64_t out = 0;
        auto [p, ec] =
            std::from_chars(digits.data(), digits.data() + digits.size(), out);
        if (ec == std::errc() && p == digits.data() + digits.size())
            return Value{out};
    }
    try {
        size_t used = 0;
        const double out = std::stod(digits, &used);
        if (used == digits.size()) return Value{out};
    } catch (...) {
    }
    throw ParseError(c.line, "cannot parse value: " + tok);
}

std::string parse_key(Cursor& c) {
    c.skip_space();
    size_t end = c.pos;
    while (end < c.s.size() &&
           (std::isalnum(static_cast<unsigned char>(c.s[end])) ||
            c.s[end] == '_' || c.s[end] == '-' || c.s[end] == '.'))
        ++end;
    if (end == c.pos) throw ParseError(c.line, "expected a key");
    std::string key = c.s.substr(c.pos, end - c.pos);
    c.pos = end;
    return key;
}

}  // namespace

Table parse(const std::string& text) {
    Table table;
    std::istringstream in(text);
    std::string raw;
    std::string prefix;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        Cursor c{raw, 0, line_no};
        c.skip_space();
        if (c.done() || c.peek() == '#') continue;
        if (c.peek() == '[') {
            ++c.pos;
            const std::string name = parse_key(c);
            c.skip_space();
            if (c.peek() != ']')
                throw ParseError(line_no, "expected ']' after table name");
            ++c.pos;
            c.skip_space();
            if (!c.done() && c.peek() != '#')
                throw ParseError(line_no, "trailing content after table header");
            prefix = name + ".";
            continue;
        }
        const std::string key = parse_key(c);
        c.skip_space();
        if (c.peek() != '=')
            throw ParseError(line_no, "expected '=' after key '" + key + "'");
        ++c.pos;
        Value v = parse_scalar(c);
        c.skip_space();
        if (!c.done() && c.peek() != '#')
            throw ParseError(line_no, "trailing content after value");
        table.set(prefix + key, std::move(v));
    }
    return table;
}

Table parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace dicke2::toml
