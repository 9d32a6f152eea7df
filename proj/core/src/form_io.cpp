#include "qpforms/form_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "qpforms/errors.hpp"

namespace qpforms {

namespace {

// Strip comments and surrounding whitespace; empty result means skip.
std::string clean_line(const std::string& raw) {
    std::string s = raw.substr(0, raw.find('#'));
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

long parse_long(const std::string& tok, const char* what) {
    try {
        size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size()) throw ParseError(std::string("trailing junk in ") + what);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + ": '" + tok + "'");
    }
}

} // namespace

Form read_form(std::istream& in) {
    std::optional<Form> form;
    int lineno = 0;
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = clean_line(raw);
        if (line.empty()) continue;
        std::istringstream ls(line);
        if (!form) {
            long p = -1, n = -1, d = -1, prec = kDefaultPrecision;
            std::string kv;
            while (ls >> kv) {
                size_t eq = kv.find('=');
                if (eq == std::string::npos)
                    throw ParseError("line " + std::to_string(lineno) +
                                     ": header wants key=value, got '" + kv + "'");
                std::string key = kv.substr(0, eq);
                long val = parse_long(kv.substr(eq + 1), "header value");
                if (key == "p")
                    p = val;
                else if (key == "n")
                    n = val;
                else if (key == "d")
                    d = val;
                else if (key == "prec")
                    prec = val;
                else
                    throw ParseError("line " + std::to_string(lineno) +
                                     ": unknown header key '" + key + "'");
            }
            if (p < 2 || n < 1 || d < 0 || prec < 1)
                throw ParseError("line " + std::to_string(lineno) +
                                 ": header needs p>=2, n>=1, d>=0, prec>=1");
            form.emplace(static_cast<unsigned long>(p), static_cast<int>(prec),
                         static_cast<int>(n), static_cast<int>(d));
            continue;
        }
        std::string ctok;
        if (!(ls >> ctok))
            throw ParseError("line " + std::to_string(lineno) + ": missing coefficient");
        Monomial mono;
        std::string etok;
        while (ls >> etok) {
            long e = parse_long(etok, "exponent");
            if (e < 0) throw ParseError("line " + std::to_string(lineno) + ": negative exponent");
            mono.push_back(static_cast<int>(e));
        }
        if (static_cast<int>(mono.size()) != form->nvars())
            throw ParseError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(form->nvars()) + " exponents, got " +
                             std::to_string(mono.size()));
        PadicScalar c =
            PadicScalar::parse_token(ctok, form->prime(), form->precision());
        try {
            form->add_term(mono, c);
        } catch (const Error& err) {
            throw ParseError("line " + std::to_string(lineno) + ": " + err.what());
        }
    }
    if (!form) throw ParseError("empty input: no header line");
    return *form;
}

Form read_form_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_form(in);
}

Form parse_form(const std::string& text) {
    std::istringstream in(text);
    return read_form(in);
}

void write_form(std::ostream& out, const Form& f) {
    out << "p=" << f.prime() << " n=" << f.nvars() << " d=" << f.degree()
        << " prec=" << f.precision() << "\n";
    for (const auto& [mono, c] : f.terms()) {
        out << c.token();
        for (int e : mono) out << ' ' << e;
        out << "\n";
    }
}

std::string form_to_string(const Form& f) {
    std::ostringstream out;
    write_form(out, f);
    return out.str();
}

} // namespace qpforms
