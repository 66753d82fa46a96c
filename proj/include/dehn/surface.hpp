#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "dehn/errors.hpp"

namespace dehn {

/// A freely reduced word in the generators A_1..A_2p of the genus-p surface
/// group. Letter +i stands for A_i and -i for its inverse.
class Word {
public:
    explicit Word(int genus) : genus_(genus) {
        if (genus < 1) throw InvalidArgument("genus must be at least 1");
    }

    /// Freely reduces `letters`; throws on indices outside +-2p or zero.
    static Word reduce(int genus, const std::vector<int>& letters) {
        Word w(genus);
        for (int letter : letters) {
            if (letter == 0 || std::abs(letter) > 2 * genus)
                throw InvalidArgument("letter " + std::to_string(letter) + " out of range for genus " +
                                      std::to_string(genus));
            if (!w.letters_.empty() && w.letters_.back() == -letter)
                w.letters_.pop_back();
            else
                w.letters_.push_back(letter);
        }
        return w;
    }

    static Word generator(int genus, int index) { return reduce(genus, {index}); }

    int genus() const noexcept { return genus_; }
    const std::vector<int>& letters() const noexcept { return letters_; }
    std::size_t size() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }

    Word operator*(const Word& other) const {
        require_same_genus(other);
        std::vector<int> joined = letters_;
        joined.insert(joined.end(), other.letters_.begin(), other.letters_.end());
        return reduce(genus_, joined);
    }

    Word inverse() const {
        Word w(genus_);
        w.letters_.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(-*it);
        return w;
    }

    /// Exponent sum of generator `index` (1-based); zero for null-homologous words.
    int exponent_sum(int index) const {
        int total = 0;
        for (int letter : letters_)
            if (std::abs(letter) == index) total += letter > 0 ? 1 : -1;
        return total;
    }

    friend bool operator==(const Word&, const Word&) = default;

private:
    void require_same_genus(const Word& other) const {
        if (genus_ != other.genus_) throw InvalidArgument("words of different genus");
    }

    int genus_;
    std::vector<int> letters_;
};

/// Word of C(A_i, A_j) = A_i A_j A_i^-1 A_j^-1.
inline Word commutator_word(int genus, int i, int j) { return Word::reduce(genus, {i, j, -i, -j}); }

/// prod_{i=1}^{p} C(A_i, A_{i+p}).
inline Word surface_relation(int genus) {
    std::vector<int> letters;
    letters.reserve(4 * static_cast<std::size_t>(genus));
    for (int i = 1; i <= genus; ++i) {
        letters.insert(letters.end(), {i, i + genus, -i, -(i + genus)});
    }
    return Word::reduce(genus, letters);
}

/// A curve of the fixed registry: the deformed generator loops A_i' and the
/// standard separating curves with word C(A_1,A_{p+1}) ... C(A_k,A_{p+k}).
/// Sep(k) puts handles 1..k on one side and k+1..p on the other.
class CurveId {
public:
    enum class Kind { Gen, Sep };

    static CurveId gen(int genus, int i) {
        if (genus < 1 || i < 1 || i > 2 * genus)
            throw InvalidArgument("Gen(" + std::to_string(i) + ") invalid at genus " + std::to_string(genus));
        return CurveId(Kind::Gen, i, genus);
    }
    static CurveId sep(int genus, int k) {
        if (genus < 2 || k < 1 || k > genus - 1)
            throw InvalidArgument("Sep(" + std::to_string(k) + ") invalid at genus " + std::to_string(genus));
        return CurveId(Kind::Sep, k, genus);
    }

    Kind kind() const noexcept { return kind_; }
    int index() const noexcept { return index_; }
    int genus() const noexcept { return genus_; }
    bool is_generator() const noexcept { return kind_ == Kind::Gen; }

    std::string label() const {
        return (kind_ == Kind::Gen ? "Gen(" : "Sep(") + std::to_string(index_) + ")";
    }

    friend bool operator==(const CurveId&, const CurveId&) = default;

private:
    CurveId(Kind kind, int index, int genus) : kind_(kind), index_(index), genus_(genus) {}

    Kind kind_;
    int index_;
    int genus_;
};

inline Word curve_word(const CurveId& c) {
    const int p = c.genus();
    if (c.is_generator()) return Word::generator(p, c.index());
    std::vector<int> letters;
    for (int i = 1; i <= c.index(); ++i) letters.insert(letters.end(), {i, i + p, -i, -(i + p)});
    return Word::reduce(p, letters);
}

/// Disjointness in the registry. Only the dual pair A_i', A_{p+i}' meets;
/// separating curves avoid every other registry curve.
inline bool curves_disjoint(const CurveId& a, const CurveId& b) {
    if (a.genus() != b.genus()) throw InvalidArgument("curves of different genus");
    if (a == b) return false;
    if (a.is_generator() && b.is_generator()) {
        const int p = a.genus();
        const int lo = std::min(a.index(), b.index());
        const int hi = std::max(a.index(), b.index());
        return !(lo <= p && hi == lo + p);
    }
    return true;
}

/// All curves of the registry at genus p: Gen(1..2p) then Sep(1..p-1).
inline std::vector<CurveId> registry_curves(int genus) {
    std::vector<CurveId> out;
    for (int i = 1; i <= 2 * genus; ++i) out.push_back(CurveId::gen(genus, i));
    for (int k = 1; k <= genus - 1; ++k) out.push_back(CurveId::sep(genus, k));
    return out;
}

}  // namespace dehn
