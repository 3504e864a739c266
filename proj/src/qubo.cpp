// Copyright 2026 The quboform Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "quboform/qubo.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace quboform {

VarLabel VarLabel::logical(int arc) {
    VarLabel l;
    l.kind = Kind::Logical;
    l.arc = arc;
    return l;
}

VarLabel VarLabel::slack(int node, std::string tag, int k) {
    VarLabel l;
    l.kind = Kind::Slack;
    l.node = node;
    l.tag = std::move(tag);
    l.k = k;
    return l;
}

bool VarLabel::operator==(const VarLabel& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::Logical) return arc == o.arc;
    return node == o.node && tag == o.tag && k == o.k;
}

std::string VarLabel::to_string() const {
    if (kind == Kind::Logical) return "x" + std::to_string(arc);
    return "s[" + std::to_string(node) + "," + tag + "," + std::to_string(k) + "]";
}

Qubo::Qubo(int n_logical) : n_logical_(n_logical), offset_(0) {
    for (int i = 0; i < n_logical; ++i) labels_.push_back(VarLabel::logical(i));
}

void Qubo::add(int i, int j, const Rational& value) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= size()) throw Error("qubo index out of range");
    Rational c = value;
    c.canonicalize();
    if (c == 0) return;
    auto [it, inserted] = coeffs_.try_emplace({i, j}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) coeffs_.erase(it);
    }
}

Rational Qubo::coeff(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = coeffs_.find({i, j});
    return it == coeffs_.end() ? Rational(0) : it->second;
}

bool Qubo::claim_owner(const SlackOwner& owner) { return owners_.insert(owner).second; }

int Qubo::add_slack(int node, const std::string& tag, int k) {
    VarLabel l = VarLabel::slack(node, tag, k);
    for (const VarLabel& e : labels_) {
        if (e == l) throw Error("duplicate slack label " + l.to_string());
    }
    labels_.push_back(l);
    return size() - 1;
}

int Qubo::slack_count(int node, const std::string& tag) const {
    int c = 0;
    for (const VarLabel& l : labels_) c += l.is_slack() && l.node == node && l.tag == tag;
    return c;
}

void Qubo::push_label(const VarLabel& label) {
    if (label.is_slack()) {
        claim_owner({label.node, label.tag});
    } else if (n_slack() > 0) {
        throw Error("logical label after slack labels");
    } else {
        ++n_logical_;
    }
    labels_.push_back(label);
}

BlockIndex build_block_index(const Qubo& q) {
    BlockIndex index;
    std::map<SlackOwner, int> where;
    std::vector<int> block_of(q.size(), -1);
    for (int v = q.n_logical(); v < q.size(); ++v) {
        const VarLabel& l = q.labels()[v];
        SlackOwner owner{l.node, l.tag};
        auto [it, inserted] = where.try_emplace(owner, static_cast<int>(index.blocks.size()));
        if (inserted) index.blocks.push_back({owner, {}, {}});
        index.blocks[it->second].slacks.push_back(v);
        block_of[v] = it->second;
    }
    std::vector<std::set<int>> touched(index.blocks.size());
    for (const auto& [key, c] : q.coeffs()) {
        int bi = block_of[key.first], bj = block_of[key.second];
        if (bi >= 0 && bj >= 0 && bi != bj) {
            throw Error("coefficient couples slacks of different owners");
        }
        if (bi < 0 && bj >= 0) touched[bj].insert(key.first);
    }
    for (std::size_t b = 0; b < index.blocks.size(); ++b) {
        index.blocks[b].logicals.assign(touched[b].begin(), touched[b].end());
    }
    return index;
}

Rational eval_qubo(const Qubo& q, const Bits& a) {
    if (static_cast<int>(a.size()) != q.size()) throw Error("assignment length mismatch");
    Rational r = q.offset();
    for (const auto& [k, c] : q.coeffs()) {
        if (a[k.first] && a[k.second]) r += c;
    }
    return r;
}

void embed_penalty_into(Qubo& q, const QuadraticPenalty& p, const std::vector<int>& logical_map,
                        const SlackOwner& owner, const Rational& scale) {
    if (static_cast<int>(logical_map.size()) != p.m_logical()) throw Error("logical map size mismatch");
    std::set<int> seen;
    for (int v : logical_map) {
        if (v < 0 || v >= q.n_logical()) throw Error("logical map target out of range");
        if (!seen.insert(v).second) throw Error("logical map collision");
    }
    if (!q.claim_owner(owner)) {
        throw Error("slack owner (" + std::to_string(owner.node) + "," + owner.tag + ") already embedded");
    }
    std::vector<int> to(p.size());
    for (int k = 0; k < p.m_logical(); ++k) to[k] = logical_map[k];
    for (int k = 0; k < p.m_slack(); ++k) to[p.m_logical() + k] = q.add_slack(owner.node, owner.tag, k);
    q.add_offset(p.constant() * scale);
    for (const auto& [key, c] : p.terms()) q.add(to[key.first], to[key.second], c * scale);
}

Qubo embed_penalty(const Qubo& q, const QuadraticPenalty& p, const std::vector<int>& logical_map,
                   const SlackOwner& owner, const Rational& scale) {
    Qubo out = q;
    embed_penalty_into(out, p, logical_map, owner, scale);
    return out;
}

namespace {

// Common denominator of every coefficient and whether the scaled values fit
// comfortably into 64-bit sums.
bool integer_scale(const Qubo& q, Rational& scale_out) {
    mpz_class l = q.offset().get_den();
    for (const auto& [k, c] : q.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_class total = abs(q.offset().get_num()) * (l / q.offset().get_den());
    for (const auto& [k, c] : q.coeffs()) total += abs(c.get_num()) * (l / c.get_den());
    scale_out = Rational(l);
    mpz_class limit = mpz_class(1) << 61;
    return total < limit;
}

std::int64_t to_i64(const Rational& c, const Rational& scale) {
    Rational v = c * scale;
    return v.get_num().get_si();
}

template <class V>
struct Engine {
    struct Term {
        int a, b;
        V c;
    };
    struct BlockData {
        std::vector<int> logical_shift;
        int n_slack = 0;
        std::vector<Term> terms;
        std::vector<V> table;
    };

    int n = 0;
    V offset{};
    std::vector<Term> logical_terms;
    std::vector<BlockData> blocks;

    template <class Convert>
    Engine(const Qubo& q, const BlockIndex& index, Convert conv) : n(q.n_logical()) {
        if (n > 63) throw CapExceeded("slack maximization supports at most 63 logical variables");
        offset = conv(q.offset());
        std::vector<int> block_of(q.size(), -1), local(q.size(), -1);
        for (std::size_t b = 0; b < index.blocks.size(); ++b) {
            const Block& blk = index.blocks[b];
            if (static_cast<int>(blk.slacks.size()) > kMaxBlockSlacks) {
                throw CapExceeded("block has more than 20 slacks");
            }
            BlockData d;
            for (int s : blk.slacks) {
                block_of[s] = static_cast<int>(b);
            }
            for (std::size_t t = 0; t < blk.logicals.size(); ++t) {
                d.logical_shift.push_back(n - 1 - blk.logicals[t]);
            }
            d.n_slack = static_cast<int>(blk.slacks.size());
            blocks.push_back(std::move(d));
        }
        for (int v = q.n_logical(); v < q.size(); ++v) {
            if (block_of[v] < 0) throw Error("unindexed slack label " + q.labels()[v].to_string());
        }
        // local numbering inside each block: logicals first, then slacks
        std::vector<std::map<int, int>> logical_pos(blocks.size());
        for (std::size_t b = 0; b < index.blocks.size(); ++b) {
            const Block& blk = index.blocks[b];
            const int t = static_cast<int>(blk.logicals.size());
            for (int i = 0; i < t; ++i) logical_pos[b][blk.logicals[i]] = i;
            for (int k = 0; k < static_cast<int>(blk.slacks.size()); ++k) local[blk.slacks[k]] = t + k;
        }
        for (const auto& [key, c] : q.coeffs()) {
            int b = block_of[key.first] >= 0 ? block_of[key.first] : block_of[key.second];
            if (b < 0) {
                logical_terms.push_back({key.first, key.second, conv(c)});
                continue;
            }
            auto loc = [&](int v) { return block_of[v] >= 0 ? local[v] : logical_pos[b].at(v); };
            int a = loc(key.first), bb = loc(key.second);
            if (a > bb) std::swap(a, bb);
            blocks[b].terms.push_back({a, bb, conv(c)});
        }
        for (BlockData& d : blocks) {
            const int t = static_cast<int>(d.logical_shift.size());
            if (t + d.n_slack <= 22) {
                d.table.resize(std::size_t{1} << t);
                for (std::uint64_t m = 0; m < d.table.size(); ++m) d.table[m] = enumerate(d, m);
            }
        }
    }

    static bool local_bit(std::uint64_t joint, int pos, int width) {
        return (joint >> (width - 1 - pos)) & 1u;
    }

    V enumerate(const BlockData& d, std::uint64_t tmask) const {
        const int t = static_cast<int>(d.logical_shift.size());
        const int width = t + d.n_slack;
        V best{};
        const std::uint64_t total = std::uint64_t{1} << d.n_slack;
        for (std::uint64_t s = 0; s < total; ++s) {
            std::uint64_t joint = (tmask << d.n_slack) | s;
            V v{};
            for (const Term& term : d.terms) {
                if (local_bit(joint, term.a, width) && local_bit(joint, term.b, width)) v += term.c;
            }
            if (s == 0 || v > best) best = v;
        }
        return best;
    }

    V at(std::uint64_t x) const {
        V v = offset;
        for (const Term& term : logical_terms) {
            if (((x >> (n - 1 - term.a)) & 1u) && ((x >> (n - 1 - term.b)) & 1u)) v += term.c;
        }
        for (const BlockData& d : blocks) {
            std::uint64_t m = 0;
            for (int sh : d.logical_shift) m = (m << 1) | ((x >> sh) & 1u);
            v += d.table.empty() ? enumerate(d, m) : d.table[m];
        }
        return v;
    }
};

}  // namespace

struct SlackMaximizer::Impl {
    Rational scale;
    std::unique_ptr<Engine<std::int64_t>> fast;
    std::unique_ptr<Engine<Rational>> exact;
    int n = 0;
};

SlackMaximizer::SlackMaximizer(const Qubo& q, const BlockIndex& blocks) : impl_(std::make_unique<Impl>()) {
    impl_->n = q.n_logical();
    Rational scale;
    if (integer_scale(q, scale)) {
        impl_->scale = scale;
        impl_->fast = std::make_unique<Engine<std::int64_t>>(
                q, blocks, [&](const Rational& c) { return to_i64(c, scale); });
    } else {
        impl_->scale = 1;
        impl_->exact = std::make_unique<Engine<Rational>>(q, blocks, [](const Rational& c) { return c; });
    }
}

SlackMaximizer::~SlackMaximizer() = default;
SlackMaximizer::SlackMaximizer(SlackMaximizer&&) noexcept = default;

Rational SlackMaximizer::at_index(std::uint64_t x) const {
    if (impl_->fast) return Rational(impl_->fast->at(x)) / impl_->scale;
    return impl_->exact->at(x);
}

Rational SlackMaximizer::operator()(const Bits& x) const {
    if (static_cast<int>(x.size()) != impl_->n) throw Error("logical assignment length mismatch");
    return at_index(index_from_bits(x));
}

bool SlackMaximizer::exact_integers() const { return impl_->fast != nullptr; }

std::int64_t SlackMaximizer::scaled_at_index(std::uint64_t x) const {
    if (!impl_->fast) throw Error("scaled evaluation unavailable for these coefficients");
    return impl_->fast->at(x);
}

const Rational& SlackMaximizer::scale() const { return impl_->scale; }

Rational max_over_slacks(const Qubo& q, const BlockIndex& blocks, const Bits& x) {
    return SlackMaximizer(q, blocks)(x);
}

namespace {

template <class V, class Convert>
QuboMaximum gray_code_max(const Qubo& q, std::size_t report_cap, Convert conv, const Rational& scale) {
    const int n = q.size();
    std::vector<std::vector<std::pair<int, V>>> adj(n);
    std::vector<V> field(n, V{});
    for (const auto& [k, c] : q.coeffs()) {
        V v = conv(c);
        if (k.first == k.second) {
            field[k.first] += v;
        } else {
            adj[k.first].emplace_back(k.second, v);
            adj[k.second].emplace_back(k.first, v);
        }
    }
    std::vector<std::uint8_t> x(n, 0);
    V cur = conv(q.offset());
    V best = cur;
    std::vector<std::uint64_t> arg{0};
    bool truncated = false;
    std::uint64_t index = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        int p = std::countr_zero(i);
        int var = n - 1 - p;
        if (x[var]) {
            cur -= field[var];
            x[var] = 0;
            for (auto& [j, c] : adj[var]) field[j] -= c;
        } else {
            cur += field[var];
            x[var] = 1;
            for (auto& [j, c] : adj[var]) field[j] += c;
        }
        index ^= std::uint64_t{1} << p;
        if (cur > best) {
            best = cur;
            arg.assign(1, index);
            truncated = false;
        } else if (cur == best) {
            if (arg.size() < report_cap) {
                arg.push_back(index);
            } else {
                truncated = true;
            }
        }
    }
    std::sort(arg.begin(), arg.end());
    QuboMaximum out;
    out.value = Rational(best) / scale;
    out.truncated = truncated;
    for (auto a : arg) out.maximizers.push_back(bits_from_index(a, n));
    return out;
}

}  // namespace

QuboMaximum brute_force_qubo_max(const Qubo& q, int cap, std::size_t report_cap) {
    if (q.size() > cap) {
        throw CapExceeded("qubo has " + std::to_string(q.size()) + " variables, cap is " + std::to_string(cap));
    }
    Rational scale;
    if (integer_scale(q, scale)) {
        return gray_code_max<std::int64_t>(
                q, report_cap, [&](const Rational& c) { return to_i64(c, scale); }, scale);
    }
    return gray_code_max<Rational>(q, report_cap, [](const Rational& c) { return c; }, Rational(1));
}

void write_qubo(std::ostream& out, const Qubo& q) {
    out << "qubo v1\n";
    out << "vars " << q.n_logical() << ' ' << q.n_slack() << '\n';
    out << "offset " << to_string(q.offset()) << '\n';
    for (int i = 0; i < q.size(); ++i) {
        const VarLabel& l = q.labels()[i];
        if (l.is_slack()) {
            out << "label " << i << " slack " << l.node << ' ' << l.tag << ' ' << l.k << '\n';
        } else {
            out << "label " << i << " logical " << l.arc << '\n';
        }
    }
    for (const auto& [k, c] : q.coeffs()) out << k.first << ' ' << k.second << ' ' << to_string(c) << '\n';
}

Qubo read_qubo(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next = [&](std::string& dst) {
        while (std::getline(in, dst)) {
            ++lineno;
            if (!dst.empty() && dst.back() == '\r') dst.pop_back();
            if (!dst.empty() && dst[0] != '#') return true;
        }
        return false;
    };
    if (!next(line) || line != "qubo v1") throw ParseError("missing 'qubo v1' header", lineno);
    int n_logical = 0, n_slack = 0;
    {
        if (!next(line)) throw ParseError("missing vars line", lineno);
        std::istringstream ss(line);
        std::string kw;
        if (!(ss >> kw >> n_logical >> n_slack) || kw != "vars" || n_logical < 0 || n_slack < 0) {
            throw ParseError("malformed vars line", lineno);
        }
    }
    Qubo q(0);
    {
        if (!next(line)) throw ParseError("missing offset line", lineno);
        std::istringstream ss(line);
        std::string kw, r;
        if (!(ss >> kw >> r) || kw != "offset") throw ParseError("malformed offset line", lineno);
        try {
            q.add_offset(parse_rational(r));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    const int n = n_logical + n_slack;
    for (int i = 0; i < n; ++i) {
        if (!next(line)) throw ParseError("missing label " + std::to_string(i), lineno);
        std::istringstream ss(line);
        std::string kw, kind;
        int idx;
        if (!(ss >> kw >> idx >> kind) || kw != "label" || idx != i) {
            throw ParseError("expected label " + std::to_string(i), lineno);
        }
        VarLabel l;
        if (kind == "logical") {
            int arc;
            if (!(ss >> arc) || i >= n_logical || arc != i) throw ParseError("bad logical label", lineno);
            l = VarLabel::logical(arc);
        } else if (kind == "slack") {
            int node, k;
            std::string tag;
            if (!(ss >> node >> tag >> k) || i < n_logical) throw ParseError("bad slack label", lineno);
            l = VarLabel::slack(node, tag, k);
            for (int j = n_logical; j < q.size(); ++j) {
                if (q.labels()[j] == l) throw ParseError("duplicate slack label", lineno);
            }
        } else {
            throw ParseError("unknown label kind '" + kind + "'", lineno);
        }
        q.push_label(l);
    }
    while (next(line)) {
        std::istringstream ss(line);
        int i, j;
        std::string r;
        if (!(ss >> i >> j >> r)) throw ParseError("malformed coefficient line", lineno);
        if (i > j || i < 0 || j >= n) throw ParseError("coefficient index out of range or i > j", lineno);
        try {
            q.add(i, j, parse_rational(r));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return q;
}

void write_qubo_file(const std::string& path, const Qubo& q) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    write_qubo(out, q);
}

Qubo read_qubo_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    return read_qubo(in);
}

}  // namespace quboform
