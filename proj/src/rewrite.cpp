#include "ncdr/rewrite.hpp"

#include <algorithm>
#include <deque>

namespace ncdr {

namespace {

// Position of the first subword occurrence of any rule lhs; ties broken by
// rule index. Returns {pos, rule} or {npos, -1}.
std::pair<std::size_t, int> first_match(const std::vector<RewriteRule>& rules, const Word& w) {
    std::size_t best_pos = Word::npos;
    int best_rule = -1;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        auto pos = w.find(rules[r].lhs);
        if (pos != Word::npos && (pos < best_pos || (pos == best_pos && best_rule < 0))) {
            if (pos < best_pos) {
                best_pos = pos;
                best_rule = static_cast<int>(r);
            }
        }
    }
    return {best_pos, best_rule};
}

} // namespace

bool RewriteSystem::is_normal(const Word& w) const {
    for (const auto& r : rules)
        if (w.find(r.lhs) != Word::npos) return false;
    return true;
}

bool RewriteSystem::reduce_step(NCPoly& p) const {
    NCPoly out;
    bool changed = false;
    for (const auto& [w, c] : p.terms) {
        auto [pos, ri] = first_match(rules, w);
        if (ri < 0) {
            out.add(w, c);
            continue;
        }
        changed = true;
        const RewriteRule& rule = rules[ri];
        Word prefix = w.substr(0, pos);
        Word suffix = w.substr(pos + rule.lhs.size());
        for (const auto& [rw, rc] : rule.rhs.terms) out.add(prefix + rw + suffix, c * rc);
    }
    if (changed) p = std::move(out);
    return changed;
}

NCPoly RewriteSystem::reduce(const NCPoly& p) const {
    NCPoly q = p;
    while (reduce_step(q)) {
    }
    return q;
}

namespace {

// Normalize a nonzero polynomial into a rule lhs -> rhs (monic leading word).
RewriteRule make_rule(const NCPoly& p, const MonomialOrder& ord) {
    const Word* lead = p.leading_word(ord);
    Rat lc = p.terms.at(*lead);
    RewriteRule rule;
    rule.lhs = *lead;
    for (const auto& [w, c] : p.terms)
        if (w != rule.lhs) rule.rhs.add(w, -c / lc);
    return rule;
}

} // namespace

RewriteSystem complete_rewrite(const AlgebraPresentation& pres) {
    RewriteSystem rs;
    rs.gens = pres.gens;
    rs.param_letter = pres.param_letter;
    rs.completion_cap = pres.degree_cap;

    std::deque<NCPoly> pending(pres.relations.begin(), pres.relations.end());
    auto push_poly = [&](const NCPoly& p) {
        NCPoly q = rs.reduce(p);
        if (q.zero()) return;
        const Word* lead = q.leading_word(rs.order());
        if (lead->empty()) throw RewriteError("relation reduces to a nonzero constant");
        rs.rules.push_back(make_rule(q, rs.order()));
        // Inter-reduce: re-normalize earlier right-hand sides lazily by full
        // reduction at use time; leading words stay distinct because each new
        // lead is in normal form for the previous rules.
    };

    // Seed rules.
    while (!pending.empty()) {
        NCPoly p = pending.front();
        pending.pop_front();
        if (rs.reduce(p).zero()) continue;
        push_poly(p);
    }

    // Resolve overlap and inclusion ambiguities up to the cap.
    bool changed = true;
    while (changed) {
        changed = false;
        std::size_t n = rs.rules.size();
        for (std::size_t i = 0; i < n && !changed; ++i) {
            for (std::size_t j = 0; j < n && !changed; ++j) {
                const Word& u = rs.rules[i].lhs;
                const Word& v = rs.rules[j].lhs;
                // Overlaps: a proper suffix of u equals a proper prefix of v.
                for (std::size_t k = 1; k < u.size() && k <= v.size(); ++k) {
                    if (u.compare(u.size() - k, k, v, 0, k) != 0) continue;
                    Word super = u + v.substr(k);
                    // S-polynomial: rhs_i * v-tail  -  u-head * rhs_j
                    Word vtail = v.substr(k) /* right factor for rule i */;
                    Word uhead = u.substr(0, u.size() - k);
                    NCPoly s;
                    for (const auto& [w, c] : rs.rules[i].rhs.terms) s.add(w + vtail, c);
                    for (const auto& [w, c] : rs.rules[j].rhs.terms) s.add(uhead + w, -c);
                    NCPoly red = rs.reduce(s);
                    if (red.zero()) continue;
                    if (rs.gens.weight_of_word(super) > rs.completion_cap ||
                        rs.gens.weight_of_word(*red.leading_word(rs.order())) >
                            rs.completion_cap) {
                        rs.unresolved_overlaps.push_back(super);
                        rs.confluent_below_cap = false;
                        continue;
                    }
                    rs.rules.push_back(make_rule(red, rs.order()));
                    changed = true;
                    break;
                }
                if (changed) break;
                // Inclusions: v a proper subword of u (i != j).
                if (i != j && u.size() > v.size() && u.find(v) != Word::npos) {
                    auto pos = u.find(v);
                    NCPoly s;
                    for (const auto& [w, c] : rs.rules[i].rhs.terms) s.add(w, c);
                    Word pre = u.substr(0, pos), post = u.substr(pos + v.size());
                    for (const auto& [w, c] : rs.rules[j].rhs.terms) s.add(pre + w + post, -c);
                    NCPoly red = rs.reduce(s);
                    if (!red.zero()) {
                        if (rs.gens.weight_of_word(*red.leading_word(rs.order())) >
                            rs.completion_cap) {
                            rs.unresolved_overlaps.push_back(u);
                            rs.confluent_below_cap = false;
                        } else {
                            rs.rules.push_back(make_rule(red, rs.order()));
                            changed = true;
                        }
                    }
                }
            }
        }
        if (changed) {
            // Deduplicate unresolved list on each growth round; entries may
            // become resolvable once new rules exist, so recheck from scratch.
            rs.unresolved_overlaps.clear();
            rs.confluent_below_cap = true;
        }
    }
    std::sort(rs.unresolved_overlaps.begin(), rs.unresolved_overlaps.end());
    rs.unresolved_overlaps.erase(
        std::unique(rs.unresolved_overlaps.begin(), rs.unresolved_overlaps.end()),
        rs.unresolved_overlaps.end());
    return rs;
}

} // namespace ncdr
