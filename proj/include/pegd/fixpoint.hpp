#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pegd/errors.hpp"

namespace pegd {

/// A join-semilattice of finite height.
template <class L>
concept Lattice = requires(const L& l, const typename L::value_type& a, const typename L::value_type& b) {
    { l.bottom() } -> std::convertible_to<typename L::value_type>;
    { l.join(a, b) } -> std::convertible_to<typename L::value_type>;
    { l.height() } -> std::convertible_to<std::size_t>;
    { a == b } -> std::convertible_to<bool>;
};

struct BoolLattice {
    using value_type = bool;
    bool bottom() const { return false; }
    bool join(bool a, bool b) const { return a || b; }
    std::size_t height() const { return 1; }
};

/// Result of a fixpoint run: keys in first-seen order and their values.
template <class Key, class Value>
class AnalysisTable {
public:
    const std::vector<Key>& keys() const { return keys_; }
    Value at(const Key& k) const { return values_.at(index_.at(k)); }
    bool contains(const Key& k) const { return index_.count(k) != 0; }
    std::size_t size() const { return keys_.size(); }
    bool empty() const { return keys_.empty(); }

    /// Number of full passes the solver made, including the final
    /// confirming pass.
    std::size_t passes() const { return passes_; }

private:
    template <class K, class L, class Eq>
    friend class FixpointSolver;

    std::size_t add(const Key& k, Value v) {
        auto [it, inserted] = index_.try_emplace(k, keys_.size());
        if (inserted) {
            keys_.push_back(k);
            values_.push_back(std::move(v));
        }
        return it->second;
    }

    std::vector<Key> keys_;
    std::vector<Value> values_;
    std::unordered_map<Key, std::size_t> index_;
    std::size_t passes_ = 0;
};

/// Handed to equations so they can read other keys.
template <class Key, class Value>
class FixReader {
public:
    explicit FixReader(std::function<Value(const Key&)> read) : read_(std::move(read)) {}
    Value read(const Key& k) const { return read_(k); }

private:
    std::function<Value(const Key&)> read_;
};

/// Kleene iteration from ⊥ with join. Within a pass, a read of a key not yet
/// evaluated in that pass evaluates it first (keys discovered this way join
/// the table at ⊥); a read of a key currently being evaluated sees its
/// current value. Stops after a pass that changes nothing.
template <class Key, class L, class Eq>
class FixpointSolver {
public:
    using Value = typename L::value_type;

    FixpointSolver(const L& lattice, Eq equation) : lattice_(lattice), equation_(std::move(equation)) {}

    AnalysisTable<Key, Value> solve(const std::vector<Key>& seeds) {
        for (const Key& k : seeds) table_.add(k, lattice_.bottom());
        for (;;) {
            const std::size_t budget = table_.size() * lattice_.height() + table_.size() + 1;
            if (table_.passes_ >= budget)
                throw IterationBudgetExceeded("fixpoint did not stabilize within " + std::to_string(budget) + " passes");
            ++table_.passes_;
            changed_ = false;
            done_.clear();
            for (std::size_t i = 0; i < table_.keys_.size(); ++i) evaluate(Key(table_.keys_[i]));
            if (!changed_) return std::move(table_);
        }
    }

private:
    Value evaluate(Key k) {
        std::size_t idx = table_.add(k, lattice_.bottom());
        if (done_.count(k) || active_.count(k)) return table_.values_[idx];
        active_.insert(k);
        FixReader<Key, Value> reader([this](const Key& other) { return evaluate(other); });
        Value fresh = equation_(k, reader);
        idx = table_.index_.at(k);
        Value joined = lattice_.join(table_.values_[idx], fresh);
        if (!(joined == table_.values_[idx])) {
            table_.values_[idx] = joined;
            changed_ = true;
        }
        active_.erase(k);
        done_.insert(k);
        return table_.values_[idx];
    }

    const L& lattice_;
    Eq equation_;
    AnalysisTable<Key, Value> table_;
    std::unordered_set<Key> active_;
    std::unordered_set<Key> done_;
    bool changed_ = false;
};

/// Least fixpoint of `equation` over `seeds` (and any keys it discovers).
/// `equation(key, reader)` returns the key's next approximation.
template <class Key, Lattice L, class Eq>
AnalysisTable<Key, typename L::value_type> fix(const std::vector<Key>& seeds, Eq equation, const L& lattice) {
    return FixpointSolver<Key, L, Eq>(lattice, std::move(equation)).solve(seeds);
}

}  // namespace pegd
