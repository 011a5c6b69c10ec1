#include "tandem/toml_lite.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include "tandem/errors.hpp"

namespace tandem {

using nlohmann::json;

namespace {

class Cursor {
public:
    Cursor(const std::string& s, std::size_t line) : s_(s), line_(line) {}

    bool done() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    char take() { return s_[pos_++]; }

    void skip_ws() {
        while (!done() && (peek() == ' ' || peek() == '\t')) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("toml line " + std::to_string(line_) + ": " + msg);
    }

    std::string rest() const { return s_.substr(pos_); }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::vector<std::string> parse_key_path(Cursor& c) {
    std::vector<std::string> path;
    for (;;) {
        c.skip_ws();
        std::string key;
        while (!c.done() && is_bare_key_char(c.peek())) {
            key.push_back(c.take());
        }
        if (key.empty()) {
            c.fail("expected a bare key");
        }
        path.push_back(key);
        c.skip_ws();
        if (!c.done() && c.peek() == '.') {
            c.take();
            continue;
        }
        return path;
    }
}

json parse_value(Cursor& c);

std::string parse_basic_string(Cursor& c) {
    c.take();  // opening quote
    std::string out;
    while (!c.done()) {
        const char ch = c.take();
        if (ch == '"') {
            return out;
        }
        if (ch == '\\') {
            if (c.done()) {
                break;
            }
            const char esc = c.take();
            switch (esc) {
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case 'r': out.push_back('\r'); break;
                default: c.fail(std::string("unsupported escape \\") + esc);
            }
        } else {
            out.push_back(ch);
        }
    }
    c.fail("unterminated string");
}

json parse_array(Cursor& c) {
    c.take();  // '['
    json arr = json::array();
    c.skip_ws();
    if (!c.done() && c.peek() == ']') {
        c.take();
        return arr;
    }
    for (;;) {
        arr.push_back(parse_value(c));
        c.skip_ws();
        if (c.done()) {
            c.fail("unterminated array");
        }
        const char ch = c.take();
        if (ch == ']') {
            return arr;
        }
        if (ch != ',') {
            c.fail("expected ',' or ']' in array");
        }
        c.skip_ws();
        if (!c.done() && c.peek() == ']') {  // trailing comma
            c.take();
            return arr;
        }
    }
}

json parse_inline_table(Cursor& c) {
    c.take();  // '{'
    json obj = json::object();
    c.skip_ws();
    if (!c.done() && c.peek() == '}') {
        c.take();
        return obj;
    }
    for (;;) {
        const auto path = parse_key_path(c);
        c.skip_ws();
        if (c.done() || c.take() != '=') {
            c.fail("expected '=' in inline table");
        }
        c.skip_ws();
        json* slot = &obj;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            slot = &(*slot)[path[i]];
        }
        (*slot)[path.back()] = parse_value(c);
        c.skip_ws();
        if (c.done()) {
            c.fail("unterminated inline table");
        }
        const char ch = c.take();
        if (ch == '}') {
            return obj;
        }
        if (ch != ',') {
            c.fail("expected ',' or '}' in inline table");
        }
        c.skip_ws();
    }
}

json parse_number_or_bool(Cursor& c) {
    std::string tok;
    while (!c.done()) {
        const char ch = c.peek();
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '+' || ch == '-' ||
            ch == '.' || ch == '_') {
            tok.push_back(c.take());
        } else {
            break;
        }
    }
    if (tok == "true") {
        return true;
    }
    if (tok == "false") {
        return false;
    }
    std::string digits;
    for (char ch : tok) {
        if (ch != '_') {
            digits.push_back(ch);
        }
    }
    const bool is_float = digits.find('.') != std::string::npos ||
                          digits.find('e') != std::string::npos ||
                          digits.find('E') != std::string::npos;
    try {
        std::size_t used = 0;
        if (is_float) {
            const double v = std::stod(digits, &used);
            if (used != digits.size()) {
                c.fail("bad number '" + tok + "'");
            }
            return v;
        }
        const long long v = std::stoll(digits, &used);
        if (used != digits.size()) {
            c.fail("bad number '" + tok + "'");
        }
        return v;
    } catch (const std::exception&) {
        c.fail("cannot parse value '" + tok + "'");
    }
}

json parse_value(Cursor& c) {
    c.skip_ws();
    if (c.done()) {
        c.fail("expected a value");
    }
    const char ch = c.peek();
    if (ch == '"') {
        return parse_basic_string(c);
    }
    if (ch == '[') {
        return parse_array(c);
    }
    if (ch == '{') {
        return parse_inline_table(c);
    }
    return parse_number_or_bool(c);
}

// strips comments outside strings
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (ch == '"' && (i == 0 || line[i - 1] != '\\')) {
            in_string = !in_string;
        } else if (ch == '#' && !in_string) {
            return line.substr(0, i);
        }
    }
    return line;
}

json* descend(json& root, const std::vector<std::string>& path, std::size_t lineno) {
    json* node = &root;
    for (const auto& key : path) {
        if (node->is_array()) {
            if (node->empty()) {
                throw ConfigError("toml line " + std::to_string(lineno) +
                                  ": array of tables '" + key + "' has no element yet");
            }
            node = &node->back();
        }
        if (!node->is_object()) {
            throw ConfigError("toml line " + std::to_string(lineno) + ": key '" + key +
                              "' collides with a non-table value");
        }
        if (!node->contains(key)) {
            (*node)[key] = json::object();
        }
        node = &(*node)[key];
    }
    if (node->is_array() && !node->empty()) {
        node = &node->back();
    }
    return node;
}

}  // namespace

json parse_toml(std::istream& in) {
    json root = json::object();
    json* current = &root;
    std::string raw;
    std::size_t lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip_comment(raw);
        Cursor c(line, lineno);
        c.skip_ws();
        if (c.done()) {
            continue;
        }
        if (c.peek() == '[') {
            c.take();
            const bool array_of_tables = !c.done() && c.peek() == '[';
            if (array_of_tables) {
                c.take();
            }
            const auto path = parse_key_path(c);
            c.skip_ws();
            if (c.done() || c.take() != ']') {
                c.fail("unterminated table header");
            }
            if (array_of_tables) {
                if (c.done() || c.take() != ']') {
                    c.fail("unterminated array-of-tables header");
                }
            }
            json* parent = &root;
            if (path.size() > 1) {
                parent = descend(root, {path.begin(), path.end() - 1}, lineno);
            }
            const std::string& leaf = path.back();
            if (array_of_tables) {
                if (!parent->contains(leaf)) {
                    (*parent)[leaf] = json::array();
                }
                if (!(*parent)[leaf].is_array()) {
                    c.fail("'" + leaf + "' is not an array of tables");
                }
                (*parent)[leaf].push_back(json::object());
                current = &(*parent)[leaf].back();
            } else {
                if (!parent->contains(leaf)) {
                    (*parent)[leaf] = json::object();
                }
                current = &(*parent)[leaf];
                if (!current->is_object()) {
                    c.fail("'" + leaf + "' is not a table");
                }
            }
            c.skip_ws();
            if (!c.done()) {
                c.fail("trailing characters after table header");
            }
            continue;
        }

        const auto path = parse_key_path(c);
        c.skip_ws();
        if (c.done() || c.take() != '=') {
            c.fail("expected '=' after key");
        }
        const json value = parse_value(c);
        c.skip_ws();
        if (!c.done()) {
            c.fail("trailing characters after value");
        }

        json* slot = current;
        if (path.size() > 1) {
            slot = descend(*current, {path.begin(), path.end() - 1}, lineno);
        }
        if (slot->contains(path.back())) {
            c.fail("duplicate key '" + path.back() + "'");
        }
        (*slot)[path.back()] = value;
    }
    return root;
}

json parse_toml(const std::string& text) {
    std::istringstream in(text);
    return parse_toml(in);
}

}  // namespace tandem
