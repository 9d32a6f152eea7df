#include "qpforms/bounds.hpp"

#include <algorithm>
#include <optional>

#include <json.hpp>

namespace qpforms {

const char* to_string(PrimeClass c) {
    switch (c) {
        case PrimeClass::p2: return "2";
        case PrimeClass::p3: return "3";
        case PrimeClass::p1mod3: return "1mod3";
        case PrimeClass::p2mod3: return "2mod3";
        case PrimeClass::any_p: return "any";
    }
    return "?";
}

PrimeClass parse_prime_class(const std::string& s) {
    if (s == "2" || s == "p2") return PrimeClass::p2;
    if (s == "3" || s == "p3") return PrimeClass::p3;
    if (s == "1mod3") return PrimeClass::p1mod3;
    if (s == "2mod3") return PrimeClass::p2mod3;
    if (s == "any") return PrimeClass::any_p;
    throw ParseError("unknown prime class '" + s + "' (want 2, 3, 1mod3, 2mod3 or any)");
}

const char* to_string(RuleKind k) {
    switch (k) {
        case RuleKind::cubic_generic: return "cubic-generic";
        case RuleKind::cubic_unit_cubes: return "cubic-unit-cubes";
        case RuleKind::cubic_scaled_units: return "cubic-scaled-units";
    }
    return "?";
}

RuleKind parse_rule_kind(const std::string& s) {
    if (s == "cubic-generic") return RuleKind::cubic_generic;
    if (s == "cubic-unit-cubes") return RuleKind::cubic_unit_cubes;
    if (s == "cubic-scaled-units") return RuleKind::cubic_scaled_units;
    throw ParseError("unknown rule kind '" + s + "'");
}

std::vector<RuleKind> rules_for_class(PrimeClass c) {
    switch (c) {
        case PrimeClass::p2:
        case PrimeClass::p2mod3:
            return {RuleKind::cubic_generic, RuleKind::cubic_unit_cubes};
        case PrimeClass::p3:
            return {RuleKind::cubic_scaled_units};
        case PrimeClass::p1mod3:
            return {RuleKind::cubic_generic};
        case PrimeClass::any_p:
            return {};
    }
    return {};
}

BoundState apply_rule(RuleKind k, const BoundState& s) {
    if (s.r3 < 1) throw NotApplicable("reduction rule needs a cubic form to eliminate");
    switch (k) {
        case RuleKind::cubic_generic:
            return {s.r3 - 1, 6 * (s.r3 - 1) + s.r2, 9 * s.r3 + 6 * s.r2 + s.r1};
        case RuleKind::cubic_unit_cubes:
            return {s.r3 - 1, 3 * s.r3 + s.r2, 3 * s.r3 + 3 * s.r2 + s.r1};
        case RuleKind::cubic_scaled_units:
            return {s.r3 - 1, 3 * s.r3 + s.r2, 6 * s.r3 + 3 * s.r2 + s.r1};
    }
    throw Error("unreachable rule kind");
}

BaseTable BaseTable::standard() { return BaseTable{}; }

void BaseTable::set(long r2, long bound) {
    for (auto& [k, v] : overrides_) {
        if (k == r2) {
            v = bound;
            return;
        }
    }
    overrides_.push_back({r2, bound});
}

long BaseTable::bound(long r2) const {
    if (r2 < 0) throw Error("base table: negative quadratic count");
    for (const auto& [k, v] : overrides_)
        if (k == r2) return v;
    if (r2 == 0) return 0;
    if (r2 == 1) return 4;
    if (r2 == 2) return 8;
    if (r2 <= 5) return 2 * r2 * r2 + 2;
    if (r2 % 2 == 0) return 2 * r2 * r2 - 16;
    return 2 * r2 * r2 - 14;
}

std::string BaseTable::source(long r2) const {
    for (const auto& [k, v] : overrides_)
        if (k == r2) return "override";
    if (r2 <= 2) return "small";
    if (r2 <= 5) return "fallback";
    return "table";
}

namespace {

nlohmann::json state_json(const BoundState& s) {
    return nlohmann::json{{"r3", s.r3}, {"r2", s.r2}, {"r1", s.r1}};
}

BoundState state_from_json(const nlohmann::json& j) {
    return BoundState{j.at("r3").get<long>(), j.at("r2").get<long>(),
                      j.at("r1").get<long>()};
}

} // namespace

std::string Certificate::to_json() const {
    nlohmann::json j;
    j["class"] = to_string(cls);
    j["chain_class"] = to_string(chain_class);
    j["start"] = state_json(start);
    nlohmann::json st = nlohmann::json::array();
    for (const CertificateStep& s : steps) {
        st.push_back(nlohmann::json{{"rule", to_string(s.rule)},
                                    {"before", state_json(s.before)},
                                    {"after", state_json(s.after)}});
    }
    j["steps"] = std::move(st);
    j["base_r2"] = base_r2;
    j["base_bound"] = base_bound;
    j["linear_r1"] = linear_r1;
    j["bound"] = bound;
    return j.dump(2);
}

Certificate Certificate::from_json(const std::string& text) {
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        Certificate c;
        c.cls = parse_prime_class(j.at("class").get<std::string>());
        c.chain_class = parse_prime_class(j.at("chain_class").get<std::string>());
        c.start = state_from_json(j.at("start"));
        for (const auto& s : j.at("steps")) {
            CertificateStep step;
            step.rule = parse_rule_kind(s.at("rule").get<std::string>());
            step.before = state_from_json(s.at("before"));
            step.after = state_from_json(s.at("after"));
            c.steps.push_back(step);
        }
        c.base_r2 = j.at("base_r2").get<long>();
        c.base_bound = j.at("base_bound").get<long>();
        c.linear_r1 = j.at("linear_r1").get<long>();
        c.bound = j.at("bound").get<long>();
        return c;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("certificate: ") + e.what());
    }
}

bool Certificate::replay(const BaseTable& table) const {
    std::vector<RuleKind> rules = rules_for_class(chain_class);
    BoundState s = start;
    for (const CertificateStep& step : steps) {
        if (std::find(rules.begin(), rules.end(), step.rule) == rules.end()) return false;
        if (!(step.before == s)) return false;
        BoundState after;
        try {
            after = apply_rule(step.rule, s);
        } catch (const NotApplicable&) {
            return false;
        }
        if (!(after == step.after)) return false;
        s = after;
    }
    if (s.r3 != 0) return false;
    if (base_r2 != s.r2 || linear_r1 != s.r1) return false;
    if (base_bound != table.bound(s.r2)) return false;
    if (bound != base_bound + linear_r1) return false;
    if (cls == PrimeClass::any_p) {
        long worst = -1;
        for (PrimeClass c :
             {PrimeClass::p2, PrimeClass::p3, PrimeClass::p1mod3, PrimeClass::p2mod3}) {
            BoundQuery q;
            q.state = start;
            q.cls = c;
            worst = std::max(worst, best_bound(q, table).bound);
        }
        return bound == worst;
    }
    return cls == chain_class;
}

namespace {

void search_chains(const BoundState& s, const std::vector<RuleKind>& rules,
                   const BaseTable& table, std::vector<CertificateStep>& prefix,
                   std::optional<Certificate>& best) {
    if (s.r3 == 0) {
        long b = table.bound(s.r2) + s.r1;
        if (best && best->bound <= b) return;  // strict improvement keeps lex-first ties
        Certificate c;
        c.start = prefix.empty() ? s : prefix.front().before;
        c.steps = prefix;
        c.base_r2 = s.r2;
        c.base_bound = table.bound(s.r2);
        c.linear_r1 = s.r1;
        c.bound = b;
        best = std::move(c);
        return;
    }
    for (RuleKind k : rules) {
        CertificateStep step{k, s, apply_rule(k, s)};
        prefix.push_back(step);
        search_chains(step.after, rules, table, prefix, best);
        prefix.pop_back();
    }
}

} // namespace

Certificate best_bound(const BoundQuery& q, const BaseTable& table) {
    if (q.state.r3 < 0 || q.state.r2 < 0 || q.state.r1 < 0)
        throw Error("bound query: negative form counts");
    if (q.state.r3 > q.r3_guard)
        throw RefusedTooLarge("bound query: " + std::to_string(q.state.r3) +
                              " cubics exceed the exhaustive-search guard of " +
                              std::to_string(q.r3_guard));

    if (q.cls == PrimeClass::any_p) {
        if (!q.restrict_rules.empty())
            throw NotApplicable("rule restriction is only meaningful for a concrete class");
        std::optional<Certificate> worst;
        for (PrimeClass c :
             {PrimeClass::p2, PrimeClass::p3, PrimeClass::p1mod3, PrimeClass::p2mod3}) {
            BoundQuery qq = q;
            qq.cls = c;
            Certificate cert = best_bound(qq, table);
            if (!worst || cert.bound > worst->bound) worst = std::move(cert);
        }
        worst->cls = PrimeClass::any_p;
        return *worst;
    }

    std::vector<RuleKind> admissible = rules_for_class(q.cls);
    std::vector<RuleKind> rules;
    if (q.restrict_rules.empty()) {
        rules = admissible;
    } else {
        for (RuleKind k : q.restrict_rules) {
            if (std::find(admissible.begin(), admissible.end(), k) == admissible.end())
                throw NotApplicable(std::string("rule ") + to_string(k) +
                                    " is not admissible for prime class " + to_string(q.cls));
            rules.push_back(k);
        }
    }
    if (q.state.r3 > 0 && rules.empty())
        throw NoRuleAvailable("no reduction rule available for prime class " +
                              std::string(to_string(q.cls)));

    std::optional<Certificate> best;
    std::vector<CertificateStep> prefix;
    search_chains(q.state, rules, table, prefix, best);
    best->cls = q.cls;
    best->chain_class = q.cls;
    best->start = q.state;
    return *best;
}

} // namespace qpforms
