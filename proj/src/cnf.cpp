#include "idforge/cnf.hpp"

#include "idforge/errors.hpp"
#include "idforge/json_io.hpp"
#include "idforge/term_set.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace idforge {

namespace {

// Transitivity clauses grow with the cube of the pool, and every blocking
// clause costs one exact measure evaluation; both caps keep encode() honest
// about what it can finish.
constexpr int kMaxPool = 96;
constexpr std::uint64_t kMaxEvaluations = 2'000'000;

std::uint64_t term_count(int arity) { return std::uint64_t{1} << (1u << arity); }

std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t out = 1;
    for (int k = 0; k < exp; ++k)
        out *= base;
    return out;
}

// digit m-1 (m = 1..g) of the tuple index, base `size`
std::uint64_t tuple_digit(std::uint64_t t, std::uint64_t size, int m) {
    for (int k = 1; k < m; ++k)
        t /= size;
    return t % size;
}

// All partitions of {0..n-1} as block-id vectors in restricted-growth order.
std::vector<std::vector<int>> partitions_of(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int blocks) -> void {
        if (pos == n) {
            out.push_back(rgs);
            return;
        }
        for (int b = 0; b <= blocks; ++b) {
            rgs[static_cast<std::size_t>(pos)] = b;
            self(self, pos + 1, std::max(blocks, b + 1));
        }
    };
    rec(rec, 0, 0);
    if (n == 0)
        out.assign(1, {});
    return out;
}

void check_guards(const StatementParams& p) {
    if (p.kappa > 3 || p.lambda > 3)
        throw ResourceError("encode: kappa and lambda are limited to 3");
    for (int L = 1; L <= p.lambda; ++L)
        if (p.f_at(L) > 2 || p.g_at(L) > 2)
            throw ResourceError("encode: f and g are limited to 2 per level");
}

void build_frame(CnfInstance& c) {
    const StatementParams& p = c.params;
    for (VertexPair w : p.pairs()) {
        for (int L = 1; L <= p.lambda; ++L) {
            std::uint64_t size = term_count(p.f_at(L));
            for (int m = 1; m <= p.g_at(L); ++m)
                for (std::uint64_t i = 0; i < size; ++i)
                    c.qKeys.push_back({w, L, m, i});
        }
    }
    for (VertexPair w : p.pairs()) {
        for (int L = 1; L <= p.lambda; ++L) {
            std::uint64_t tuples = ipow(term_count(p.f_at(L)), p.g_at(L));
            for (std::uint64_t t = 0; t < tuples; ++t)
                for (int pos = 0; pos < p.f_at(L); ++pos)
                    c.poolKeys.push_back({w, L, t, pos});
        }
    }
    if (c.pool_count() > kMaxPool)
        throw ResourceError("encode: relevant pool of " + std::to_string(c.pool_count()) +
                            " variables exceeds the limit of " + std::to_string(kMaxPool));
    c.reindex();
}

// sorted-r-subsets of [kappa]
std::vector<std::vector<int>> r_subsets(int kappa, int r) {
    std::vector<std::vector<int>> out;
    if (r > kappa)
        return out;
    std::vector<int> P(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
        P[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(P);
        int pos = r - 1;
        while (pos >= 0 && P[static_cast<std::size_t>(pos)] == kappa - r + pos)
            --pos;
        if (pos < 0)
            break;
        ++P[static_cast<std::size_t>(pos)];
        for (int q = pos + 1; q < r; ++q)
            P[static_cast<std::size_t>(q)] = P[static_cast<std::size_t>(q - 1)] + 1;
    }
    return out;
}

std::uint64_t estimated_evaluations(const StatementParams& p) {
    auto bell = [](int n) { return static_cast<std::uint64_t>(partitions_of(n).size()); };
    const auto pairs = p.pairs();
    std::uint64_t total = 0;
    for (int L = 1; L <= p.lambda; ++L) {
        std::uint64_t tuples = ipow(term_count(p.f_at(L)), p.g_at(L));
        total += pairs.size() * tuples * bell(p.f_at(L)); // per-slot partition checks
        for (int N = 1; N < L; ++N) {
            std::uint64_t tuplesN = ipow(term_count(p.f_at(N)), p.g_at(N));
            total += pairs.size() * tuplesN * tuples * bell(p.f_at(N) + p.f_at(L));
        }
        total += pairs.size() * tuples * bell(p.f_at(L)); // level-diagonal agreement
    }
    const int r = p.identity.size();
    const int E = pair_count(r);
    for (int L = 1; L <= p.lambda; ++L) {
        std::uint64_t tuples = ipow(term_count(p.f_at(L)), p.g_at(L));
        total += r_subsets(p.kappa, r).size() * ipow(tuples, E) * bell(E * p.f_at(L));
    }
    return total;
}

// Appends the literals excluding partition rho on the pool variables W.
void append_partition_literals(const CnfInstance& c, const std::vector<int>& W,
                               const std::vector<int>& rho, std::vector<int>& clause) {
    for (std::size_t a = 0; a < W.size(); ++a)
        for (std::size_t b = a + 1; b < W.size(); ++b) {
            int var = c.p_var(W[a], W[b]);
            clause.push_back(rho[a] == rho[b] ? -var : var);
        }
}

struct ClauseSink {
    std::vector<std::vector<int>>& clauses;
    std::set<std::vector<int>> seen;

    void emit(std::vector<int> clause) {
        std::sort(clause.begin(), clause.end(), [](int x, int y) {
            return std::abs(x) != std::abs(y) ? std::abs(x) < std::abs(y) : x < y;
        });
        clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
        if (seen.insert(clause).second)
            clauses.push_back(std::move(clause));
    }
};

} // namespace

int CnfInstance::var_count() const {
    return q_count() + pool_count() * (pool_count() - 1) / 2;
}

void CnfInstance::reindex() {
    qIndex_.clear();
    poolIndex_.clear();
    for (std::size_t k = 0; k < qKeys.size(); ++k)
        qIndex_[qKeys[k]] = static_cast<int>(k) + 1;
    for (std::size_t k = 0; k < poolKeys.size(); ++k)
        poolIndex_[poolKeys[k]] = static_cast<int>(k);
    if (qIndex_.size() != qKeys.size() || poolIndex_.size() != poolKeys.size())
        throw std::invalid_argument("CnfInstance: duplicate variable keys");
}

int CnfInstance::q_var(VertexPair w, int L, int m, std::uint64_t i) const {
    auto it = qIndex_.find({w, L, m, i});
    if (it == qIndex_.end())
        throw std::invalid_argument("CnfInstance: unknown q-variable");
    return it->second;
}

int CnfInstance::pool_index(const PoolKey& key) const {
    auto it = poolIndex_.find(key);
    if (it == poolIndex_.end())
        throw std::invalid_argument("CnfInstance: unknown pool variable");
    return it->second;
}

int CnfInstance::p_var(int poolA, int poolB) const {
    if (poolA == poolB || poolA < 0 || poolB < 0 || poolA >= pool_count() ||
        poolB >= pool_count())
        throw std::invalid_argument("CnfInstance: bad pool pair");
    int lo = std::min(poolA, poolB);
    int hi = std::max(poolA, poolB);
    return q_count() + pair_index(lo, hi, pool_count()) + 1;
}

CnfInstance encode(const StatementParams& p, int generatorBudget) {
    p.validate();
    check_guards(p);
    if (generatorBudget < 0)
        throw std::invalid_argument("encode: negative generator budget");
    if (estimated_evaluations(p) > kMaxEvaluations)
        throw ResourceError("encode: constraint enumeration exceeds the evaluation cap");

    CnfInstance c;
    c.params = p;
    c.generatorBudget = generatorBudget;
    build_frame(c);

    // base theory: exactly one term index per (w, L, m)
    for (VertexPair w : p.pairs()) {
        for (int L = 1; L <= p.lambda; ++L) {
            std::uint64_t size = term_count(p.f_at(L));
            for (int m = 1; m <= p.g_at(L); ++m) {
                std::vector<int> atLeast;
                for (std::uint64_t i = 0; i < size; ++i)
                    atLeast.push_back(c.q_var(w, L, m, i));
                c.clauses.push_back(atLeast);
                for (std::uint64_t i = 0; i < size; ++i)
                    for (std::uint64_t j = i + 1; j < size; ++j)
                        c.clauses.push_back({-c.q_var(w, L, m, i), -c.q_var(w, L, m, j)});
            }
        }
    }
    // base theory: p is transitive (symmetric by representation)
    for (int a = 0; a < c.pool_count(); ++a)
        for (int b = a + 1; b < c.pool_count(); ++b)
            for (int d = b + 1; d < c.pool_count(); ++d) {
                int ab = c.p_var(a, b), bd = c.p_var(b, d), ad = c.p_var(a, d);
                c.clauses.push_back({-ab, -bd, ad});
                c.clauses.push_back({-ab, -ad, bd});
                c.clauses.push_back({-ad, -bd, ab});
            }

    ClauseSink sink{c.clauses, {}};

    // pool indices of the tuple slot (w, L) under term choice t
    auto pool_tuple = [&](VertexPair w, int L, std::uint64_t t) {
        std::vector<int> W;
        for (int pos = 0; pos < p.f_at(L); ++pos)
            W.push_back(c.pool_index({w, L, t, pos}));
        return W;
    };
    // generator tuple reading block ids off a partition segment
    auto block_gens = [](const std::vector<int>& rho, std::size_t offset, int len) {
        std::vector<GeneratorId> gens;
        for (int pos = 0; pos < len; ++pos)
            gens.push_back(GeneratorId{
                static_cast<std::uint32_t>(rho[offset + static_cast<std::size_t>(pos)])});
        return gens;
    };
    auto eval_cells = [&](int L, std::uint64_t t, const std::vector<GeneratorId>& gens) {
        CompleteTermSet set(p.f_at(L));
        std::vector<AlgebraElement> cells;
        for (int m = 1; m <= p.g_at(L); ++m)
            cells.push_back(eval(set.term(tuple_digit(t, set.size(), m)), gens));
        return cells;
    };
    auto q_literals = [&](VertexPair w, int L, std::uint64_t t, std::vector<int>& clause) {
        std::uint64_t size = term_count(p.f_at(L));
        for (int m = 1; m <= p.g_at(L); ++m)
            clause.push_back(-c.q_var(w, L, m, tuple_digit(t, size, m)));
    };

    // partition constraint per slot
    for (VertexPair w : p.pairs()) {
        for (int L = 1; L <= p.lambda; ++L) {
            std::uint64_t tuples = ipow(term_count(p.f_at(L)), p.g_at(L));
            const auto rhos = partitions_of(p.f_at(L));
            for (std::uint64_t t = 0; t < tuples; ++t) {
                std::vector<int> W = pool_tuple(w, L, t);
                for (const auto& rho : rhos) {
                    auto cells = eval_cells(L, t, block_gens(rho, 0, p.f_at(L)));
                    if (is_partition_sequence(cells))
                        continue;
                    std::vector<int> clause;
                    q_literals(w, L, t, clause);
                    append_partition_literals(c, W, rho, clause);
                    sink.emit(std::move(clause));
                }
            }
        }
    }

    // cross-level agreement per pair
    for (VertexPair w : p.pairs()) {
        for (int L = 1; L <= p.lambda; ++L) {
            std::uint64_t tuplesL = ipow(term_count(p.f_at(L)), p.g_at(L));
            for (int N = 1; N <= L; ++N) {
                DyadicMeasure threshold =
                    DyadicMeasure::one_minus_half_pow(static_cast<unsigned>(N));
                std::uint64_t tuplesN = ipow(term_count(p.f_at(N)), p.g_at(N));
                if (N == L) {
                    const auto rhos = partitions_of(p.f_at(L));
                    for (std::uint64_t t = 0; t < tuplesL; ++t) {
                        std::vector<int> W = pool_tuple(w, L, t);
                        for (const auto& rho : rhos) {
                            auto cells = eval_cells(L, t, block_gens(rho, 0, p.f_at(L)));
                            if (c4_union_measure(cells, cells) >= threshold)
                                continue;
                            std::vector<int> clause;
                            q_literals(w, L, t, clause);
                            append_partition_literals(c, W, rho, clause);
                            sink.emit(std::move(clause));
                        }
                    }
                    continue;
                }
                const auto rhos = partitions_of(p.f_at(N) + p.f_at(L));
                for (std::uint64_t tN = 0; tN < tuplesN; ++tN) {
                    std::vector<int> WN = pool_tuple(w, N, tN);
                    for (std::uint64_t tL = 0; tL < tuplesL; ++tL) {
                        std::vector<int> W = WN;
                        for (int v : pool_tuple(w, L, tL))
                            W.push_back(v);
                        for (const auto& rho : rhos) {
                            auto cellsN =
                                eval_cells(N, tN, block_gens(rho, 0, p.f_at(N)));
                            auto cellsL = eval_cells(
                                L, tL,
                                block_gens(rho, static_cast<std::size_t>(p.f_at(N)),
                                           p.f_at(L)));
                            if (c4_union_measure(cellsN, cellsL) >= threshold)
                                continue;
                            std::vector<int> clause;
                            q_literals(w, N, tN, clause);
                            q_literals(w, L, tL, clause);
                            append_partition_literals(c, W, rho, clause);
                            sink.emit(std::move(clause));
                        }
                    }
                }
            }
        }
    }

    // realization bound per (P, L)
    const int r = p.identity.size();
    const int E = pair_count(r);
    for (int L = 1; L <= p.lambda; ++L) {
        const int g = p.g_at(L);
        std::vector<char> table;
        std::uint64_t tuples = ipow(term_count(p.f_at(L)), p.g_at(L));
        const auto rhos = partitions_of(E * p.f_at(L));
        for (const auto& P : r_subsets(p.kappa, r)) {
            if (table.empty())
                table = realizing_colorings(p.identity, g);
            std::vector<VertexPair> zs;
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j)
                    zs.emplace_back(P[static_cast<std::size_t>(i)],
                                    P[static_cast<std::size_t>(j)]);
            std::vector<std::uint64_t> choice(static_cast<std::size_t>(E), 0);
            while (true) {
                std::vector<int> W;
                for (int e = 0; e < E; ++e)
                    for (int v : pool_tuple(zs[static_cast<std::size_t>(e)], L,
                                            choice[static_cast<std::size_t>(e)]))
                        W.push_back(v);
                for (const auto& rho : rhos) {
                    std::vector<std::vector<AlgebraElement>> pairCells;
                    for (int e = 0; e < E; ++e)
                        pairCells.push_back(eval_cells(
                            L, choice[static_cast<std::size_t>(e)],
                            block_gens(rho, static_cast<std::size_t>(e * p.f_at(L)),
                                       p.f_at(L))));
                    if (realizing_union_measure(pairCells, table, g)
                            .less_than(1, static_cast<std::uint64_t>(L)))
                        continue;
                    std::vector<int> clause;
                    for (int e = 0; e < E; ++e)
                        q_literals(zs[static_cast<std::size_t>(e)], L,
                                   choice[static_cast<std::size_t>(e)], clause);
                    append_partition_literals(c, W, rho, clause);
                    sink.emit(std::move(clause));
                }
                int pos = E - 1;
                while (pos >= 0 && choice[static_cast<std::size_t>(pos)] + 1 == tuples) {
                    choice[static_cast<std::size_t>(pos)] = 0;
                    --pos;
                }
                if (pos < 0)
                    break;
                ++choice[static_cast<std::size_t>(pos)];
            }
        }
    }
    return c;
}

std::string export_dimacs(const CnfInstance& c) {
    std::ostringstream out;
    Json meta = params_to_json(c.params);
    meta["generatorBudget"] = c.generatorBudget;
    out << "c meta " << meta.dump() << "\n";
    for (std::size_t k = 0; k < c.qKeys.size(); ++k) {
        const QKey& q = c.qKeys[k];
        out << "c q w=" << q.w.first << "," << q.w.second << " L=" << q.L
            << " m=" << q.m << " i=" << q.i << " var=" << k + 1 << "\n";
    }
    for (std::size_t k = 0; k < c.poolKeys.size(); ++k) {
        const PoolKey& x = c.poolKeys[k];
        out << "c x idx=" << k << " w=" << x.w.first << "," << x.w.second
            << " L=" << x.L << " t=" << x.t << " pos=" << x.pos << "\n";
    }
    for (int a = 0; a < c.pool_count(); ++a)
        for (int b = a + 1; b < c.pool_count(); ++b)
            out << "c p w=" << a << "," << b << " var=" << c.p_var(a, b) << "\n";
    out << "p cnf " << c.var_count() << " " << c.clauses.size() << "\n";
    for (const auto& clause : c.clauses) {
        for (int lit : clause)
            out << lit << " ";
        out << "0\n";
    }
    return out.str();
}

CnfInstance parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool haveMeta = false;
    Json meta;
    bool haveHeader = false;
    long long headerVars = 0, headerClauses = 0;
    std::vector<std::vector<int>> clauses;
    std::vector<int> current;

    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.rfind("c meta ", 0) == 0) {
            try {
                meta = Json::parse(line.substr(7));
            } catch (const nlohmann::json::parse_error& err) {
                throw ParseError("line " + std::to_string(lineNo) + ": bad meta JSON: " +
                                 err.what());
            }
            haveMeta = true;
            continue;
        }
        if (line.empty() || line[0] == 'c' || line[0] == '%')
            continue;
        if (line[0] == 'p') {
            std::istringstream header(line);
            std::string tag, fmt;
            if (!(header >> tag >> fmt >> headerVars >> headerClauses) || fmt != "cnf")
                throw ParseError("line " + std::to_string(lineNo) + ": bad DIMACS header");
            haveHeader = true;
            continue;
        }
        std::istringstream body(line);
        long long lit;
        while (body >> lit) {
            if (lit == 0) {
                clauses.push_back(current);
                current.clear();
            } else {
                current.push_back(static_cast<int>(lit));
            }
        }
        std::string rest;
        if (body.clear(), body >> rest)
            throw ParseError("line " + std::to_string(lineNo) + ": stray token \"" +
                             rest + "\"");
    }
    if (!current.empty())
        throw ParseError("unterminated clause at end of input");
    if (!haveMeta)
        throw ParseError("missing \"c meta\" parameter line");
    if (!haveHeader)
        throw ParseError("missing \"p cnf\" header");

    CnfInstance c;
    c.params = params_from_json(meta);
    check_guards(c.params);
    if (meta.contains("generatorBudget")) {
        if (!meta["generatorBudget"].is_number_integer())
            throw ParseError("generatorBudget must be an integer");
        c.generatorBudget = meta["generatorBudget"].get<int>();
    }
    build_frame(c);
    if (headerVars != c.var_count())
        throw ParseError("header declares " + std::to_string(headerVars) +
                         " variables; the parameters require " +
                         std::to_string(c.var_count()));
    if (headerClauses != static_cast<long long>(clauses.size()))
        throw ParseError("header declares " + std::to_string(headerClauses) +
                         " clauses; found " + std::to_string(clauses.size()));
    for (const auto& clause : clauses)
        for (int lit : clause)
            if (lit == 0 || std::abs(lit) > c.var_count())
                throw ParseError("literal " + std::to_string(lit) + " out of range");
    c.clauses = std::move(clauses);
    return c;
}

std::vector<int> parse_model_literals(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<int> literals;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c' || line[0] == 's' || line[0] == '%')
            continue;
        std::istringstream body(line);
        std::string token;
        while (body >> token) {
            if (token == "v" || token == "V")
                continue;
            try {
                std::size_t used = 0;
                int lit = std::stoi(token, &used);
                if (used != token.size())
                    throw std::invalid_argument(token);
                if (lit != 0)
                    literals.push_back(lit);
            } catch (const std::exception&) {
                throw ParseError("model file: bad token \"" + token + "\"");
            }
        }
    }
    return literals;
}

Witness decode(const std::vector<int>& modelLiterals, const CnfInstance& c) {
    const int vars = c.var_count();
    std::vector<signed char> value(static_cast<std::size_t>(vars) + 1, 0); // default false
    std::vector<signed char> stated(static_cast<std::size_t>(vars) + 1, 0);
    for (int lit : modelLiterals) {
        int var = std::abs(lit);
        if (var == 0 || var > vars)
            throw std::invalid_argument("decode: literal " + std::to_string(lit) +
                                        " names no variable of the instance");
        signed char v = lit > 0 ? 1 : 0;
        if (stated[static_cast<std::size_t>(var)] &&
            value[static_cast<std::size_t>(var)] != v)
            throw std::invalid_argument("decode: contradictory literals for variable " +
                                        std::to_string(var));
        stated[static_cast<std::size_t>(var)] = 1;
        value[static_cast<std::size_t>(var)] = v;
    }
    auto truth = [&](int var) { return value[static_cast<std::size_t>(var)] == 1; };

    for (std::size_t k = 0; k < c.clauses.size(); ++k) {
        bool satisfied = false;
        for (int lit : c.clauses[k])
            if (truth(std::abs(lit)) == (lit > 0)) {
                satisfied = true;
                break;
            }
        if (!satisfied)
            throw std::invalid_argument("decode: model leaves clause " + std::to_string(k + 1) +
                                        " unsatisfied");
    }

    const StatementParams& p = c.params;
    // chosen term index per (w, L, m)
    std::map<std::pair<VertexPair, int>, std::vector<std::uint64_t>> chosenTerms;
    for (VertexPair w : p.pairs()) {
        for (int L = 1; L <= p.lambda; ++L) {
            std::uint64_t size = term_count(p.f_at(L));
            std::vector<std::uint64_t> terms;
            for (int m = 1; m <= p.g_at(L); ++m) {
                int hits = 0;
                std::uint64_t pick = 0;
                for (std::uint64_t i = 0; i < size; ++i)
                    if (truth(c.q_var(w, L, m, i))) {
                        ++hits;
                        pick = i;
                    }
                if (hits != 1)
                    throw std::invalid_argument(
                        "decode: " + std::to_string(hits) + " term choices for pair {" +
                        std::to_string(w.first) + "," + std::to_string(w.second) +
                        "} level " + std::to_string(L) + " color " + std::to_string(m));
                terms.push_back(pick);
            }
            chosenTerms[{w, L}] = std::move(terms);
        }
    }

    // classes of the p-relation over the pool
    std::vector<int> parent(static_cast<std::size_t>(c.pool_count()));
    for (int k = 0; k < c.pool_count(); ++k)
        parent[static_cast<std::size_t>(k)] = k;
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (int a = 0; a < c.pool_count(); ++a)
        for (int b = a + 1; b < c.pool_count(); ++b)
            if (truth(c.p_var(a, b)))
                parent[static_cast<std::size_t>(find(a))] = find(b);

    // one fresh generator per class, in discovery order over the chosen tuples
    Witness witness;
    std::map<int, std::uint32_t> classIds;
    for (VertexPair w : p.pairs()) {
        for (int L = 1; L <= p.lambda; ++L) {
            const auto& terms = chosenTerms[{w, L}];
            std::uint64_t size = term_count(p.f_at(L));
            std::uint64_t t = 0;
            std::uint64_t scale = 1;
            for (int m = 1; m <= p.g_at(L); ++m) {
                t += terms[static_cast<std::size_t>(m - 1)] * scale;
                scale *= size;
            }
            WitnessEntry entry;
            entry.terms = terms;
            for (int pos = 0; pos < p.f_at(L); ++pos) {
                int root = find(c.pool_index({w, L, t, pos}));
                auto [it, fresh] = classIds.try_emplace(
                    root, static_cast<std::uint32_t>(classIds.size()));
                (void)fresh;
                entry.gens.push_back(GeneratorId{it->second});
            }
            witness.entries[{w, L}] = std::move(entry);
        }
    }
    return witness;
}

} // namespace idforge
