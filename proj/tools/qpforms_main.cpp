// qpforms: batch command-line front end for the p-adic forms toolkit.
//
// Subcommands: solve, lift, levels, expand, anisotropy, bounds, verify,
// construct.  Exit codes: 0 success with a positive result, 1 sound negative
// (search exhausted, certified anisotropic, invalid certificate), 2 parse
// error, 3 inapplicable/oracle exhausted/driver stuck/budget exhausted,
// 4 refused as too large.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpforms/bounds.hpp"
#include "qpforms/construct.hpp"
#include "qpforms/form_io.hpp"
#include "qpforms/hensel.hpp"
#include "qpforms/zerosearch.hpp"

using namespace qpforms;
using nlohmann::json;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitSoundNo = 1;
constexpr int kExitParse = 2;
constexpr int kExitInapplicable = 3;
constexpr int kExitRefused = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

VectorQp parse_vector_tokens(const std::vector<std::string>& toks, unsigned long p,
                             long prec) {
    std::vector<PadicScalar> entries;
    for (const std::string& t : toks)
        entries.push_back(PadicScalar::parse_token(t, p, prec));
    return VectorQp(p, entries);
}

// --point / --dir values: comma-separated scalar tokens.
VectorQp parse_vector_arg(const std::string& arg, unsigned long p, long prec) {
    std::vector<std::string> toks;
    std::string cur;
    for (char c : arg) {
        if (c == ',') {
            if (!cur.empty()) toks.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    if (toks.empty()) throw ParseError("empty vector argument");
    return parse_vector_tokens(toks, p, prec);
}

// Vector files: one vector per line, whitespace-separated scalar tokens,
// '#' starts a comment.
std::vector<VectorQp> read_vector_file(const std::string& path, unsigned long p,
                                       long prec) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open vector file: " + path);
    std::vector<VectorQp> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        try {
            out.push_back(parse_vector_tokens(toks, p, prec));
        } catch (const Error& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

json vector_json(const VectorQp& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i].token());
    return a;
}

void emit(bool as_json, const json& record, const std::string& text) {
    if (as_json)
        std::cout << record.dump(2) << "\n";
    else
        std::cout << text;
}

// ---------------------------------------------------------------- solve ----

int cmd_solve(const std::string& formfile, int k, long max_candidates, int jobs,
              long target_prec, bool as_json) {
    Form F = read_form_file(formfile);
    SearchBudget budget;
    budget.k = k;
    budget.max_candidates = max_candidates;
    budget.parallel_width = jobs;
    budget.target_prec = target_prec;
    SearchResult r = find_zero(F, budget);

    json rec;
    rec["command"] = "solve";
    rec["outcome"] = to_string(r.outcome);
    rec["examined"] = r.examined;
    rec["residue_zero_count"] = r.residue_zero_count;
    std::ostringstream os;
    os << "outcome: " << to_string(r.outcome) << "\n";
    os << "examined: " << r.examined << " residue-zeros: " << r.residue_zero_count << "\n";
    if (r.witness) {
        rec["witness"] = vector_json(*r.witness);
        rec["lift_branch"] = to_string(r.lift.line.branch);
        os << "witness:";
        for (int i = 0; i < r.witness->size(); ++i) os << " " << (*r.witness)[i].token();
        os << "\nlift branch: " << to_string(r.lift.line.branch) << "\n";
    }
    emit(as_json, rec, os.str());
    switch (r.outcome) {
        case SearchOutcome::zero_found: return kExitSuccess;
        case SearchOutcome::exhausted_no_liftable: return kExitSoundNo;
        case SearchOutcome::budget_exhausted: return kExitInapplicable;
    }
    return kExitInapplicable;
}

// ----------------------------------------------------------------- lift ----

int cmd_lift(const std::string& formfile, const std::string& point, long target_prec,
             bool as_json) {
    Form F = read_form_file(formfile);
    VectorQp v = parse_vector_arg(point, F.prime(), F.precision());
    if (v.size() != F.nvars()) throw ParseError("--point arity does not match the form");
    PointLift pl = lift_smooth_point(F, v, target_prec);

    const std::string& why = pl.reason.empty() ? pl.line.reason : pl.reason;
    json rec;
    rec["command"] = "lift";
    rec["ok"] = pl.ok;
    rec["branch"] = to_string(pl.line.branch);
    rec["reason"] = why;
    rec["iterations"] = pl.line.iterations;
    std::ostringstream os;
    os << "ok: " << (pl.ok ? "yes" : "no") << "\n";
    os << "branch: " << to_string(pl.line.branch) << "\n";
    if (!why.empty()) os << "reason: " << why << "\n";
    if (pl.ok && pl.point) {
        rec["coordinate"] = pl.coordinate;
        rec["point"] = vector_json(*pl.point);
        rec["certified_prec"] = pl.line.certified_prec;
        os << "coordinate: " << pl.coordinate << "\n";
        os << "certified precision: " << pl.line.certified_prec << "\n";
        os << "point:";
        for (int i = 0; i < pl.point->size(); ++i) os << " " << (*pl.point)[i].token();
        os << "\n";
    }
    emit(as_json, rec, os.str());
    return pl.ok ? kExitSuccess : kExitInapplicable;
}

// --------------------------------------------------------------- levels ----

int cmd_levels(const std::string& formfile, const std::string& vecfile, bool as_json) {
    Form F = read_form_file(formfile);
    std::vector<VectorQp> vs = read_vector_file(vecfile, F.prime(), F.precision());
    for (const VectorQp& v : vs)
        if (v.size() != F.nvars())
            throw ParseError("vector arity does not match the form (" +
                             std::to_string(v.size()) + " vs " + std::to_string(F.nvars()) +
                             ")");
    json rows = json::array();
    std::ostringstream os;
    for (size_t i = 0; i < vs.size(); ++i) {
        json row;
        row["index"] = i;
        PadicScalar val = F.evaluate(vs[i]);
        if (val.is_zero()) {
            row["zero"] = true;
            os << i << ": zero (to precision " << val.zero_precision() << ")\n";
        } else {
            long lv = val.val() % F.degree();
            if (lv < 0) lv += F.degree();
            row["valuation"] = val.val();
            row["level"] = lv;
            os << i << ": valuation " << val.val() << " level " << lv << "\n";
        }
        rows.push_back(row);
    }
    json rec;
    rec["command"] = "levels";
    rec["rows"] = rows;
    emit(as_json, rec, os.str());
    return kExitSuccess;
}

// --------------------------------------------------------------- expand ----

int cmd_expand(const std::string& formfile, const std::string& basisfile,
               const std::string& dir, bool as_json) {
    Form F = read_form_file(formfile);
    std::vector<VectorQp> basis = read_vector_file(basisfile, F.prime(), F.precision());
    VectorQp e = parse_vector_arg(dir, F.prime(), F.precision());
    for (const VectorQp& v : basis)
        if (v.size() != F.nvars())
            throw ParseError("basis vector arity does not match the form");
    if (e.size() != F.nvars()) throw ParseError("--dir arity does not match the form");
    Expansion ex = directional_expand(F, basis, e);
    json rows = json::array();
    std::ostringstream os;
    for (const auto& [key, coeff] : ex.slots) {
        json row;
        row["d"] = key.first;
        row["j"] = key.second;
        row["coeff"] = coeff.token();
        rows.push_back(row);
        os << "d=(";
        for (size_t i = 0; i < key.first.size(); ++i)
            os << (i ? "," : "") << key.first[i];
        os << ") j=" << key.second << "  " << coeff.token() << "\n";
    }
    json rec;
    rec["command"] = "expand";
    rec["basis_size"] = ex.basis_size;
    rec["degree"] = ex.degree;
    rec["slots"] = rows;
    emit(as_json, rec, os.str());
    return kExitSuccess;
}

// ----------------------------------------------------------- anisotropy ----

int cmd_anisotropy(const std::string& formfile, int k, bool as_json) {
    Form F = read_form_file(formfile);
    AnisotropyReport rep = anisotropy_witness(F, k);
    json rec;
    rec["command"] = "anisotropy";
    rec["k"] = k;
    rec["primitive_zero_exists"] = rep.primitive_zero_exists;
    rec["blocks"] = rep.blocks.size();
    rec["enumerated"] = rep.enumerated;
    std::ostringstream os;
    if (rep.primitive_zero_exists) {
        rec["witness"] = *rep.witness;
        os << "primitive residue zero mod p^" << k << ":";
        for (unsigned long c : *rep.witness) os << " " << c;
        os << "\n";
    } else {
        os << "certified: no primitive zero mod p^" << k << " (" << rep.blocks.size()
           << " blocks, " << rep.enumerated << " tuples enumerated)\n";
    }
    emit(as_json, rec, os.str());
    return rep.primitive_zero_exists ? kExitSuccess : kExitSoundNo;
}

// --------------------------------------------------------------- bounds ----

json certificate_record(const Certificate& c) {
    return json::parse(c.to_json());
}

int cmd_bounds(long r3, long r2, long r1, const std::string& cls_str, bool replay,
               bool as_json) {
    BoundState s{r3, r2, r1};
    std::vector<PrimeClass> classes;
    bool table_mode = (cls_str == "all");
    if (table_mode) {
        classes = {PrimeClass::p2, PrimeClass::p3, PrimeClass::p1mod3, PrimeClass::p2mod3,
                   PrimeClass::any_p};
    } else {
        classes = {parse_prime_class(cls_str)};
    }
    json rows = json::array();
    std::ostringstream os;
    for (PrimeClass c : classes) {
        BoundQuery q;
        q.state = s;
        q.cls = c;
        Certificate cert = best_bound(q);
        bool ok = !replay || cert.replay();
        json row = certificate_record(cert);
        if (replay) row["replay"] = ok;
        rows.push_back(row);
        os << "class " << to_string(c) << ": bound " << cert.bound;
        if (replay) os << " (replay " << (ok ? "ok" : "FAILED") << ")";
        os << "\n";
        if (!table_mode) {
            for (const auto& st : cert.steps)
                os << "  " << to_string(st.rule) << ": (" << st.before.r3 << ","
                   << st.before.r2 << "," << st.before.r1 << ") -> (" << st.after.r3 << ","
                   << st.after.r2 << "," << st.after.r1 << ")\n";
            os << "  base r2=" << cert.base_r2 << " bound=" << cert.base_bound
               << " linear=" << cert.linear_r1 << "\n";
        }
        if (replay && !ok) {
            emit(as_json, json{{"command", "bounds"}, {"rows", rows}}, os.str());
            return kExitSoundNo;
        }
    }
    emit(as_json, json{{"command", "bounds"}, {"rows", rows}}, os.str());
    return kExitSuccess;
}

// --------------------------------------------------------------- verify ----

int cmd_verify(const std::string& certfile, bool as_json) {
    Certificate cert = Certificate::from_json(read_file(certfile));
    bool ok = cert.replay();
    json rec;
    rec["command"] = "verify";
    rec["bound"] = cert.bound;
    rec["replay"] = ok;
    emit(as_json, rec,
         std::string("replay: ") + (ok ? "ok" : "FAILED") + " (bound " +
             std::to_string(cert.bound) + ")\n");
    return ok ? kExitSuccess : kExitSoundNo;
}

// ------------------------------------------------------------ construct ----

int cmd_construct(const std::string& formfile, const std::string& driver,
                  const std::vector<std::string>& aux, int k, long max_candidates,
                  long target_prec, bool as_json) {
    Form F = read_form_file(formfile);
    std::vector<Form> G;
    for (const std::string& path : aux) G.push_back(read_form_file(path));
    ExtensionBudget budget;
    budget.k = k;
    budget.max_candidates = max_candidates;
    budget.target_prec = target_prec;

    ConstructResult r;
    if (driver == "quartic-q2") {
        if (!G.empty()) throw NotApplicable("the quartic driver takes no auxiliary forms");
        r = quartic_zero_q2(F, budget);
    } else if (driver == "cubic-p2mod3") {
        r = cubic_step_p2mod3(F, G, budget);
    } else if (driver == "cubic-p3") {
        r = cubic_step_p3(F, G, budget);
    } else {
        throw ParseError("unknown driver '" + driver +
                         "' (want quartic-q2, cubic-p2mod3 or cubic-p3)");
    }

    json rec;
    rec["command"] = "construct";
    rec["driver"] = driver;
    rec["status"] = to_string(r.status);
    rec["trace"] = r.trace;
    std::ostringstream os;
    os << "status: " << to_string(r.status) << "\n";
    for (const std::string& t : r.trace) os << "  " << t << "\n";
    if (r.status == ConstructStatus::zero) {
        rec["witness"] = vector_json(*r.witness);
        rec["value_precision"] = r.value->zero_precision();
        os << "witness:";
        for (int i = 0; i < r.witness->size(); ++i) os << " " << (*r.witness)[i].token();
        os << "\nvalue indistinguishable from zero to precision "
           << r.value->zero_precision() << "\n";
    } else {
        rec["stuck_reason"] = r.stuck_reason;
        os << "stuck: " << r.stuck_reason << "\n";
    }
    emit(as_json, rec, os.str());
    return r.status == ConstructStatus::zero ? kExitSuccess : kExitInapplicable;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic forms toolkit: zero search, Hensel lifting, constructive "
                 "drivers and bound recursion"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit one JSON record instead of text");

    // solve
    std::string s_form;
    int s_k = 1;
    long s_max = -1;
    int s_jobs = 1;
    long s_prec = kDefaultPrecision;
    unsigned long s_seed = 0;
    auto* solve = app.add_subcommand("solve", "search residue zeros mod p^k and lift");
    solve->add_option("formfile", s_form)->required();
    solve->add_option("--k", s_k, "residue modulus exponent");
    solve->add_option("--max-candidates", s_max, "stop after this many candidates (-1: all)");
    solve->add_option("--jobs", s_jobs, "parallel strata width");
    solve->add_option("--target-prec", s_prec, "certification precision for lifts");
    solve->add_option("--seed", s_seed,
                      "reserved for shuffled strata; current strata are deterministic");

    // lift
    std::string l_form, l_point;
    long l_prec = kDefaultPrecision;
    auto* lift = app.add_subcommand("lift", "lift a smooth residue point of a form");
    lift->add_option("formfile", l_form)->required();
    lift->add_option("--point", l_point, "comma-separated scalar tokens")->required();
    lift->add_option("--target-prec", l_prec);

    // levels
    std::string v_form, v_file;
    auto* levels = app.add_subcommand("levels", "valuation/level table for vectors");
    levels->add_option("formfile", v_form)->required();
    levels->add_option("--vectors", v_file, "file with one vector per line")->required();

    // expand
    std::string e_form, e_basis, e_dir;
    auto* expand = app.add_subcommand("expand", "directional expansion coefficients");
    expand->add_option("formfile", e_form)->required();
    expand->add_option("--basis", e_basis, "file with one basis vector per line")->required();
    expand->add_option("--dir", e_dir, "direction vector (comma-separated)")->required();

    // anisotropy
    std::string a_form;
    int a_k = 1;
    auto* aniso = app.add_subcommand("anisotropy", "primitive residue zero or certificate");
    aniso->add_option("formfile", a_form)->required();
    aniso->add_option("--k", a_k, "modulus exponent");

    // bounds
    long b_r3 = 0, b_r2 = 0, b_r1 = 0;
    std::string b_cls = "2";
    bool b_replay = false;
    auto* bounds = app.add_subcommand("bounds", "bound recursion with certificate");
    bounds->add_option("--r3", b_r3, "number of cubic forms")->required();
    bounds->add_option("--r2", b_r2, "number of quadratic forms")->required();
    bounds->add_option("--r1", b_r1, "number of linear forms")->required();
    bounds->add_option("--prime-class", b_cls, "2 | 3 | 1mod3 | 2mod3 | any | all");
    bounds->add_flag("--replay", b_replay, "re-verify each certificate");

    // verify
    std::string c_file;
    auto* verify = app.add_subcommand("verify", "replay a bound certificate file");
    verify->add_option("certfile", c_file)->required();

    // construct
    std::string k_form, k_driver;
    std::vector<std::string> k_aux;
    int k_k = 1;
    long k_max = 65536;
    long k_prec = kDefaultPrecision;
    auto* construct = app.add_subcommand("construct", "constructive zero drivers");
    construct->add_option("formfile", k_form)->required();
    construct->add_option("--driver", k_driver, "quartic-q2 | cubic-p2mod3 | cubic-p3")
        ->required();
    construct->add_option("--aux", k_aux, "auxiliary form files (cubic drivers)");
    construct->add_option("--k", k_k, "extension scan modulus exponent");
    construct->add_option("--max-candidates", k_max, "extension scan cap");
    construct->add_option("--target-prec", k_prec, "certification precision");

    // --json is accepted both before and after the subcommand name.
    for (auto* sc : {solve, lift, levels, expand, aniso, bounds, verify, construct})
        sc->add_flag("--json", as_json, "emit one JSON record instead of text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        if (solve->parsed()) return cmd_solve(s_form, s_k, s_max, s_jobs, s_prec, as_json);
        if (lift->parsed()) return cmd_lift(l_form, l_point, l_prec, as_json);
        if (levels->parsed()) return cmd_levels(v_form, v_file, as_json);
        if (expand->parsed()) return cmd_expand(e_form, e_basis, e_dir, as_json);
        if (aniso->parsed()) return cmd_anisotropy(a_form, a_k, as_json);
        if (bounds->parsed()) return cmd_bounds(b_r3, b_r2, b_r1, b_cls, b_replay, as_json);
        if (verify->parsed()) return cmd_verify(c_file, as_json);
        if (construct->parsed())
            return cmd_construct(k_form, k_driver, k_aux, k_k, k_max, k_prec, as_json);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const RefusedTooLarge& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitRefused;
    } catch (const NotApplicable& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const OracleExhausted& e) {
        std::cerr << "oracle exhausted: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const NoRuleAvailable& e) {
        std::cerr << "no rule available: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const InvalidPrime& e) {
        std::cerr << "invalid prime: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInapplicable;
    }
    return kExitParse;
}
