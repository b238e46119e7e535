#include "cspforge/formula.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cspforge {

struct Formula::Node {
    Kind kind;
    Var literal{};
    std::vector<Formula> children;
    uint64_t hash = 0;
    uint64_t size = 0;
};

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

}  // namespace

Formula Formula::f() {
    static const Formula instance = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::False;
        n->hash = 0xF0F0F0F0ULL;
        n->size = 0;
        return Formula(std::move(n));
    }();
    return instance;
}

Formula Formula::t() {
    static const Formula instance = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::True;
        n->hash = 0x1E1E1E1EULL;
        n->size = 0;
        return Formula(std::move(n));
    }();
    return instance;
}

Formula Formula::lit(Var v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Lit;
    n->literal = v;
    n->hash = mix(0xABCDULL, v.key());
    n->size = 1;
    return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }

Var Formula::literal() const {
    if (!is_lit()) fail("formula", "literal() on non-literal");
    return node_->literal;
}

const std::vector<Formula>& Formula::children() const { return node_->children; }

uint64_t Formula::hash() const { return node_->hash; }

uint64_t Formula::size_metric() const { return node_->size; }

int Formula::cmp(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    if (a.node_->hash != b.node_->hash) return a.node_->hash < b.node_->hash ? -1 : 1;
    if (a.kind() != b.kind()) return int(a.kind()) < int(b.kind()) ? -1 : 1;
    if (a.kind() == Kind::Lit) {
        if (a.node_->literal == b.node_->literal) return 0;
        return a.node_->literal < b.node_->literal ? -1 : 1;
    }
    const auto& ca = a.node_->children;
    const auto& cb = b.node_->children;
    if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
    for (size_t i = 0; i < ca.size(); ++i) {
        int c = cmp(ca[i], cb[i]);
        if (c != 0) return c;
    }
    return 0;
}

bool Formula::operator==(const Formula& o) const { return cmp(*this, o) == 0; }

namespace {

Formula build_nary(Formula::Kind kind, std::vector<Formula> children);

// flatten + constant elimination + sort + dedup
std::vector<Formula> normalize_children(Formula::Kind kind, std::vector<Formula> in, bool& absorbed) {
    absorbed = false;
    std::vector<Formula> flat;
    for (auto& c : in) {
        if (c.kind() == kind) {
            for (auto& g : c.children()) flat.push_back(g);
        } else if (kind == Formula::Kind::Or) {
            if (c.is_true()) {
                absorbed = true;
                return {};
            }
            if (!c.is_false()) flat.push_back(c);
        } else {
            if (c.is_false()) {
                absorbed = true;
                return {};
            }
            if (!c.is_true()) flat.push_back(c);
        }
    }
    std::sort(flat.begin(), flat.end(), [](const Formula& a, const Formula& b) {
        return Formula::cmp(a, b) < 0;
    });
    flat.erase(std::unique(flat.begin(), flat.end(),
                           [](const Formula& a, const Formula& b) { return a == b; }),
               flat.end());
    return flat;
}

}  // namespace

Formula Formula::land(std::vector<Formula> children) {
    bool absorbed = false;
    auto flat = normalize_children(Kind::And, std::move(children), absorbed);
    if (absorbed) return f();
    if (flat.empty()) return t();
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    uint64_t h = 0x517CC1B7ULL;
    uint64_t sz = flat.size() - 1;
    for (auto& c : flat) {
        h = mix(h, c.hash());
        sz += c.size_metric();
    }
    n->hash = mix(h, 0xA);
    n->size = sz;
    n->children = std::move(flat);
    return Formula(std::move(n));
}

Formula Formula::lor(std::vector<Formula> children) {
    bool absorbed = false;
    auto flat = normalize_children(Kind::Or, std::move(children), absorbed);
    if (absorbed) return t();
    if (flat.empty()) return f();
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    uint64_t h = 0x2545F491ULL;
    uint64_t sz = flat.size() - 1;
    for (auto& c : flat) {
        h = mix(h, c.hash());
        sz += c.size_metric();
    }
    n->hash = mix(h, 0x0);
    n->size = sz;
    n->children = std::move(flat);
    return Formula(std::move(n));
}

std::vector<Formula> Formula::disjuncts() const {
    if (is_or()) return children();
    if (is_false()) return {};
    return {*this};
}

std::vector<Formula> Formula::conjuncts() const {
    if (is_and()) return children();
    if (is_true()) return {};
    return {*this};
}

Formula Formula::complement() const {
    switch (kind()) {
        case Kind::False:
            return t();
        case Kind::True:
            return f();
        case Kind::Lit:
            return lit(node_->literal.partner());
        case Kind::And: {
            std::vector<Formula> cs;
            cs.reserve(children().size());
            for (auto& c : children()) cs.push_back(c.complement());
            return lor(std::move(cs));
        }
        case Kind::Or: {
            std::vector<Formula> cs;
            cs.reserve(children().size());
            for (auto& c : children()) cs.push_back(c.complement());
            return land(std::move(cs));
        }
    }
    fail("internal", "bad formula kind");
}

bool Formula::eval(const std::map<uint32_t, bool>& assignment) const {
    switch (kind()) {
        case Kind::False:
            return false;
        case Kind::True:
            return true;
        case Kind::Lit: {
            auto it = assignment.find(node_->literal.id);
            if (it == assignment.end()) fail("domain_error", "unassigned variable in formula eval");
            return node_->literal.twin ? !it->second : it->second;
        }
        case Kind::And:
            for (auto& c : children())
                if (!c.eval(assignment)) return false;
            return true;
        case Kind::Or:
            for (auto& c : children())
                if (c.eval(assignment)) return true;
            return false;
    }
    fail("internal", "bad formula kind");
}

namespace {

void collect_vars(const Formula& f, std::set<uint32_t>& out) {
    if (f.is_lit())
        out.insert(f.literal().id);
    else if (f.is_and() || f.is_or())
        for (auto& c : f.children()) collect_vars(c, out);
}

}  // namespace

std::vector<uint32_t> Formula::var_ids() const {
    std::set<uint32_t> s;
    collect_vars(*this, s);
    return {s.begin(), s.end()};
}

std::string Formula::to_string() const {
    switch (kind()) {
        case Kind::False:
            return "0";
        case Kind::True:
            return "1";
        case Kind::Lit:
            return (node_->literal.twin ? "~x" : "x") + std::to_string(node_->literal.id);
        case Kind::And:
        case Kind::Or: {
            std::ostringstream os;
            os << "(";
            bool first = true;
            for (auto& c : children()) {
                if (!first) os << (is_and() ? " & " : " | ");
                first = false;
                os << c.to_string();
            }
            os << ")";
            return os.str();
        }
    }
    fail("internal", "bad formula kind");
}

Formula normalize(const Formula& f) {
    // Construction already normalizes; rebuilding exercises idempotence.
    switch (f.kind()) {
        case Formula::Kind::False:
        case Formula::Kind::True:
        case Formula::Kind::Lit:
            return f;
        case Formula::Kind::And: {
            std::vector<Formula> cs;
            for (auto& c : f.children()) cs.push_back(normalize(c));
            return Formula::land(std::move(cs));
        }
        case Formula::Kind::Or: {
            std::vector<Formula> cs;
            for (auto& c : f.children()) cs.push_back(normalize(c));
            return Formula::lor(std::move(cs));
        }
    }
    fail("internal", "bad formula kind");
}

bool is_term(const Formula& f, int k) {
    if (f.is_constant() || f.is_lit()) return k >= 1;
    if (!f.is_and()) return false;
    if (int(f.children().size()) > k) return false;
    for (auto& c : f.children())
        if (!c.is_lit()) return false;
    return true;
}

bool is_clause(const Formula& f, int k) {
    if (f.is_constant() || f.is_lit()) return k >= 1;
    if (!f.is_or()) return false;
    if (int(f.children().size()) > k) return false;
    for (auto& c : f.children())
        if (!c.is_lit()) return false;
    return true;
}

namespace {

bool is_kdnf(const Formula& f, int k) {
    if (is_term(f, k)) return true;
    if (!f.is_or()) return false;
    for (auto& c : f.children())
        if (!is_term(c, k)) return false;
    return true;
}

bool is_kcnf(const Formula& f, int k) {
    if (is_clause(f, k)) return true;
    if (!f.is_and()) return false;
    for (auto& c : f.children())
        if (!is_clause(c, k)) return false;
    return true;
}

}  // namespace

bool in_sigma(const Formula& f, int t, int k) {
    if (t < 1 || k < 1) return false;
    if (t == 1) return is_kdnf(f, k);
    if (f.is_or()) {
        for (auto& c : f.children())
            if (!in_pi(c, t - 1, k)) return false;
        return true;
    }
    return in_pi(f, t - 1, k) || in_sigma(f, t - 1, k);
}

bool in_pi(const Formula& f, int t, int k) {
    if (t < 1 || k < 1) return false;
    if (t == 1) return is_kcnf(f, k);
    if (f.is_and()) {
        for (auto& c : f.children())
            if (!in_sigma(c, t - 1, k)) return false;
        return true;
    }
    return in_sigma(f, t - 1, k) || in_pi(f, t - 1, k);
}

FormulaClass classify_sigma(const Formula& f) {
    // formulas here are normalized trees of bounded depth; scan (t,k)
    // lexicographically.
    for (int t = 1; t <= 64; ++t) {
        // find minimal k for this t by doubling then binary search
        if (!in_sigma(f, t, 1 << 20)) continue;
        int lo = 1, hi = 1 << 20;
        while (lo < hi) {
            int mid = lo + (hi - lo) / 2;
            if (in_sigma(f, t, mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        return FormulaClass{t, lo};
    }
    fail("internal", "formula with alternation depth > 64");
}

}  // namespace cspforge
