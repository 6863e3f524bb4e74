#include "normbr/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace scenario {

namespace {

using exactlin::FinAb;
using exactlin::Int;

// Cursor over one logical line with located errors.
struct Cursor {
    const std::string& s;
    int line;
    int offset;  // column of s[0] in the source line
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what, line, offset + static_cast<int>(pos) + 1);
    }
    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    bool consume(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }
    std::string word() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' ||
                s[pos] == '\''))
            ++pos;
        if (pos == start) fail("expected a name");
        return s.substr(start, pos - start);
    }
    long integer() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos == start || (pos == start + 1 && !std::isdigit(
                                 static_cast<unsigned char>(s[start]))))
            fail("expected an integer");
        return std::stol(s.substr(start, pos - start));
    }
    std::vector<long> int_list() {
        expect('[');
        std::vector<long> out;
        if (!consume(']')) {
            do out.push_back(integer());
            while (consume(','));
            expect(']');
        }
        return out;
    }
    std::vector<std::vector<long>> int_list_list() {
        expect('[');
        std::vector<std::vector<long>> out;
        if (!consume(']')) {
            do out.push_back(int_list());
            while (consume(','));
            expect(']');
        }
        return out;
    }
};

std::vector<std::vector<int>> to_int_tables(const std::vector<std::vector<long>>& v) {
    std::vector<std::vector<int>> out;
    for (const auto& row : v) out.emplace_back(row.begin(), row.end());
    return out;
}

groups::FiniteGroup parse_group_expr(Cursor& c) {
    std::string head = c.word();
    try {
        if (head == "trivial") return groups::FiniteGroup::trivial();
        if (head == "cyclic" || head == "dihedral" || head == "sym") {
            c.expect('(');
            long n = c.integer();
            c.expect(')');
            if (head == "cyclic")
                return groups::FiniteGroup::cyclic(static_cast<int>(n));
            if (head == "dihedral")
                return groups::FiniteGroup::dihedral(static_cast<int>(n));
            return groups::FiniteGroup::symmetric(static_cast<int>(n));
        }
        if (head == "direct" || head == "semidirect") {
            c.expect('(');
            groups::FiniteGroup a = parse_group_expr(c);
            c.expect(',');
            groups::FiniteGroup b = parse_group_expr(c);
            if (head == "direct") {
                c.expect(')');
                return groups::FiniteGroup::direct(a, b);
            }
            c.expect(',');
            auto action = to_int_tables(c.int_list_list());
            c.expect(')');
            return groups::FiniteGroup::semidirect(a, b, action);
        }
        if (head == "table") {
            c.expect('(');
            auto table = to_int_tables(c.int_list_list());
            c.expect(')');
            return groups::FiniteGroup::from_table(std::move(table));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        c.fail(std::string("invalid group: ") + e.what());
    }
    c.fail("unknown group family '" + head + "'");
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string finab_str(const FinAb& g) { return g.str(); }

}  // namespace

groups::FiniteGroup parse_group(const std::string& text, int line, int col_offset) {
    Cursor c{text, line, col_offset};
    groups::FiniteGroup g = parse_group_expr(c);
    if (!c.done()) c.fail("trailing input after group expression");
    return g;
}

Scenario parse_string(const std::string& text, const std::string& name_hint) {
    Scenario sc;
    sc.spec.name = name_hint;
    bool have_group = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        if (strip(line).empty()) continue;
        Cursor c{line, lineno, 0};
        std::string key = c.word();
        if (key == "name") {
            sc.spec.name = strip(line.substr(c.pos));
        } else if (key == "group") {
            sc.spec.group = parse_group_expr(c);
            if (!c.done()) c.fail("trailing input after group expression");
            have_group = true;
        } else if (key == "variant") {
            std::string v = c.word();
            if (v == "X")
                sc.spec.variant = normic::Variant::X;
            else if (v == "X'" || v == "etale")
                sc.spec.variant = normic::Variant::XPrime;
            else
                c.fail("variant must be X or X'");
        } else if (key == "component") {
            auto elems = c.int_list();
            sc.spec.components.emplace_back(elems.begin(), elems.end());
        } else if (key == "factor") {
            normic::Factor f;
            bool have_v = false;
            while (!c.done()) {
                std::string field = c.word();
                c.expect('=');
                if (field == "v") {
                    auto elems = c.int_list();
                    f.v.assign(elems.begin(), elems.end());
                    have_v = true;
                } else if (field == "e") {
                    f.e = c.integer();
                } else if (field == "l") {
                    f.l = c.integer();
                } else {
                    c.fail("unknown factor field '" + field + "'");
                }
            }
            if (!have_v) c.fail("factor needs v=[...]");
            sc.spec.factors.push_back(std::move(f));
        } else if (key == "path") {
            std::string p = c.word();
            if (p == "generic")
                sc.path = normic::Path::Generic;
            else if (p == "shapiro")
                sc.path = normic::Path::Shapiro;
            else
                c.fail("path must be generic or shapiro");
        } else if (key == "expect") {
            Expectation e;
            e.key = c.word();
            e.value = strip(line.substr(c.pos));
            e.line = lineno;
            if (e.value.empty()) c.fail("expect needs a value");
            sc.expect.push_back(std::move(e));
        } else {
            c.fail("unknown directive '" + key + "'");
        }
    }
    if (!have_group) throw ParseError("scenario has no group line", lineno, 1);
    if (sc.spec.components.empty()) sc.spec.components = {{0}};
    return sc;
}

Scenario parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string stem = path;
    if (auto slash = stem.find_last_of('/'); slash != std::string::npos)
        stem = stem.substr(slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos)
        stem = stem.substr(0, dot);
    return parse_string(buf.str(), stem);
}

std::string render_table(const normic::BrauerReport& rep) {
    std::ostringstream out;
    out << "name: " << rep.name << "\n";
    out << "n: " << rep.n << "\n";
    out << "m: " << rep.m << "\n";
    out << "variant: " << (rep.variant == normic::Variant::X ? "X" : "X'") << "\n";
    out << "V: " << finab_str(rep.v) << "\n";
    out << "W: " << finab_str(rep.w) << "\n";
    out << "order: " << rep.order << "\n";
    out << "exact_group: "
        << (rep.exact_group ? finab_str(*rep.exact_group) : "undetermined") << "\n";
    for (const auto& g : rep.generators) out << "generator: " << g << "\n";
    if (rep.cths) out << "cths: " << finab_str(*rep.cths) << "\n";
    for (const auto& n : rep.notes) out << "note: " << n << "\n";
    return out.str();
}

std::string render_json(const normic::BrauerReport& rep) {
    nlohmann::ordered_json j;
    j["name"] = rep.name;
    j["n"] = rep.n;
    j["m"] = rep.m.str();
    j["variant"] = rep.variant == normic::Variant::X ? "X" : "X'";
    j["V"] = finab_str(rep.v);
    j["W"] = finab_str(rep.w);
    j["order"] = rep.order.str();
    if (rep.exact_group)
        j["exact_group"] = finab_str(*rep.exact_group);
    else
        j["exact_group"] = nullptr;
    j["generators"] = rep.generators;
    if (rep.cths)
        j["cths"] = finab_str(*rep.cths);
    else
        j["cths"] = nullptr;
    j["notes"] = rep.notes;
    return j.dump(2) + "\n";
}

std::vector<std::string> check_expectations(const Scenario& sc,
                                            const normic::BrauerReport& rep) {
    std::vector<std::string> out;
    for (const auto& e : sc.expect) {
        std::string got;
        if (e.key == "V")
            got = finab_str(rep.v);
        else if (e.key == "W")
            got = finab_str(rep.w);
        else if (e.key == "order")
            got = rep.order.str();
        else if (e.key == "exact_group")
            got = rep.exact_group ? finab_str(*rep.exact_group) : "undetermined";
        else if (e.key == "cths")
            got = rep.cths ? finab_str(*rep.cths) : "undetermined";
        else if (e.key == "n")
            got = std::to_string(rep.n);
        else if (e.key == "m")
            got = rep.m.str();
        else {
            out.push_back("line " + std::to_string(e.line) +
                          ": unknown expectation key '" + e.key + "'");
            continue;
        }
        if (got != e.value)
            out.push_back("line " + std::to_string(e.line) + ": " + e.key +
                          " expected " + e.value + ", got " + got);
    }
    return out;
}

}  // namespace scenario
