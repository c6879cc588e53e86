#pragma once

// Finite truncations of a countable-alphabet Markov shift.
//
// Letters are 1..M.  A word is admissible when every consecutive pair of
// letters is allowed by the incidence table.  Infinite sequences are
// represented by eventually periodic anchors (finite head + repeating
// cycle); depth-k potentials read only finitely many coordinates, so this
// representation is lossless for everything computed here.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cms/errors.hpp"

namespace cms {

using Letter = int;
using Word = std::vector<Letter>;

inline std::string word_to_string(const Word& w) {
    if (w.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(w[i]);
    }
    return s;
}

class TruncatedShift {
public:
    // Incidence given row-major, entry (a,b) = 1 iff letter b may follow a.
    // Rejects truncations that leave a letter without an admissible
    // successor or predecessor; silent pruning would corrupt word counts.
    TruncatedShift(int num_letters, std::vector<std::uint8_t> incidence)
        : letters_(num_letters), incidence_(std::move(incidence)) {
        if (letters_ <= 0)
            throw PreconditionError("shift: need at least one letter");
        if (incidence_.size() != static_cast<std::size_t>(letters_) * letters_)
            throw PreconditionError("shift: incidence table has wrong size");
        full_ = true;
        for (auto v : incidence_)
            if (!v) { full_ = false; break; }
        for (Letter a = 1; a <= letters_; ++a) {
            bool succ = false, pred = false;
            for (Letter b = 1; b <= letters_; ++b) {
                succ = succ || admissible(a, b);
                pred = pred || admissible(b, a);
            }
            if (!succ || !pred)
                throw PreconditionError("shift: letter " + std::to_string(a) +
                                        " has no admissible " + (succ ? "predecessor" : "successor") +
                                        " after truncation");
        }
    }

    static TruncatedShift full(int num_letters) {
        return TruncatedShift(num_letters,
                              std::vector<std::uint8_t>(static_cast<std::size_t>(num_letters) * num_letters, 1));
    }

    // A = [[1,1],[1,0]]: the word 22 is forbidden.
    static TruncatedShift golden_mean() {
        return TruncatedShift(2, {1, 1, 1, 0});
    }

    static TruncatedShift from_rows(const std::vector<std::vector<int>>& rows) {
        const int m = static_cast<int>(rows.size());
        std::vector<std::uint8_t> inc;
        inc.reserve(static_cast<std::size_t>(m) * m);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != m)
                throw PreconditionError("shift: incidence table is not square");
            for (int v : r) {
                if (v != 0 && v != 1)
                    throw PreconditionError("shift: incidence entries must be 0 or 1");
                inc.push_back(static_cast<std::uint8_t>(v));
            }
        }
        return TruncatedShift(m, std::move(inc));
    }

    int letters() const { return letters_; }
    bool full_shift() const { return full_; }

    bool admissible(Letter a, Letter b) const {
        return incidence_[static_cast<std::size_t>(a - 1) * letters_ + (b - 1)] != 0;
    }

    bool word_admissible(const Word& w) const {
        for (Letter a : w)
            if (a < 1 || a > letters_) return false;
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (!admissible(w[i], w[i + 1])) return false;
        return true;
    }

    bool operator==(const TruncatedShift& o) const {
        return letters_ == o.letters_ && incidence_ == o.incidence_;
    }

private:
    int letters_;
    std::vector<std::uint8_t> incidence_;
    bool full_ = false;
};

// Eventually periodic point: head w, then cycle c repeated forever.
struct Anchor {
    Word head;
    Word cycle;  // nonempty

    Letter letter_at(std::size_t i) const {
        if (i < head.size()) return head[i];
        return cycle[(i - head.size()) % cycle.size()];
    }

    static Anchor periodic(Word cycle) { return Anchor{{}, std::move(cycle)}; }

    Word first_letters(std::size_t n) const {
        Word w;
        w.reserve(n);
        for (std::size_t i = 0; i < n; ++i) w.push_back(letter_at(i));
        return w;
    }
};

inline bool anchor_valid(const TruncatedShift& shift, const Anchor& a) {
    if (a.cycle.empty()) return false;
    Word probe = a.head;
    probe.insert(probe.end(), a.cycle.begin(), a.cycle.end());
    probe.push_back(a.cycle.front());  // cycle wrap
    return shift.word_admissible(probe);
}

// Canonical point of the cylinder [w]: w extended by the lexicographically
// least admissible continuation (greedy least successor).  The continuation
// enters a cycle within M steps, so the result is an eventually periodic
// anchor starting with w.
inline Anchor canonical_extension(const TruncatedShift& shift, const Word& w) {
    Word head = w;
    if (head.empty()) {
        // least admissible start: least letter overall
        head.push_back(1);
    }
    std::vector<int> seen_at(static_cast<std::size_t>(shift.letters()) + 1, -1);
    Word tail;  // letters appended after head
    Letter cur = head.back();
    for (;;) {
        Letter next = 0;
        for (Letter b = 1; b <= shift.letters(); ++b)
            if (shift.admissible(cur, b)) { next = b; break; }
        if (next == 0)
            throw PreconditionError("canonical_extension: dead letter (shift invariant broken)");
        if (seen_at[next] >= 0) {
            const int start = seen_at[next];
            Word cycle(tail.begin() + start, tail.end());
            head.insert(head.end(), tail.begin(), tail.begin() + start);
            return Anchor{std::move(head), std::move(cycle)};
        }
        seen_at[next] = static_cast<int>(tail.size());
        tail.push_back(next);
        cur = next;
    }
}

namespace detail {

template <class Fn>
void foreach_word(const TruncatedShift& shift, int n, Word& scratch, const Fn& fn) {
    if (static_cast<int>(scratch.size()) == n) {
        fn(scratch);
        return;
    }
    for (Letter b = 1; b <= shift.letters(); ++b) {
        if (!scratch.empty() && !shift.admissible(scratch.back(), b)) continue;
        scratch.push_back(b);
        foreach_word(shift, n, scratch, fn);
        scratch.pop_back();
    }
}

} // namespace detail

inline constexpr std::size_t kDefaultWordCap = 10'000'000;

// All admissible words of length n in lexicographic order; n = 0 gives {empty}.
inline std::vector<Word> enumerate_words(const TruncatedShift& shift, int n,
                                         std::size_t cap = kDefaultWordCap) {
    if (n < 0) throw PreconditionError("enumerate_words: negative length");
    std::vector<Word> out;
    Word scratch;
    detail::foreach_word(shift, n, scratch, [&](const Word& w) {
        if (out.size() >= cap)
            throw ResourceError("enumerate_words: more than " + std::to_string(cap) +
                                " words of length " + std::to_string(n));
        out.push_back(w);
    });
    return out;
}

// Contiguous storage for a lexicographically sorted list of equal-length
// words.  Cylinder tables can run into millions of entries, where one
// std::vector per word costs too much memory.
class FlatWords {
public:
    FlatWords(int length, std::vector<Letter> data)
        : len_(length), data_(std::move(data)) {
        if (len_ < 0) throw PreconditionError("FlatWords: negative length");
        if (len_ == 0) {
            count_ = 1;  // the empty word
        } else {
            if (data_.size() % static_cast<std::size_t>(len_) != 0)
                throw PreconditionError("FlatWords: ragged data");
            count_ = data_.size() / static_cast<std::size_t>(len_);
        }
    }

    int word_length() const { return len_; }
    std::size_t size() const { return count_; }

    Letter letter(std::size_t row, int pos) const {
        return data_[row * static_cast<std::size_t>(len_) + static_cast<std::size_t>(pos)];
    }

    Word get(std::size_t row) const {
        Word w(static_cast<std::size_t>(len_));
        for (int j = 0; j < len_; ++j) w[static_cast<std::size_t>(j)] = letter(row, j);
        return w;
    }

    // Index of the row starting with the first len_ letters of w.
    std::optional<std::size_t> find_prefix(const Word& w) const {
        if (static_cast<int>(w.size()) < len_) return std::nullopt;
        std::size_t lo = 0, hi = count_;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            int cmp = 0;
            for (int j = 0; j < len_; ++j) {
                const Letter a = letter(mid, j), b = w[static_cast<std::size_t>(j)];
                if (a != b) { cmp = a < b ? -1 : 1; break; }
            }
            if (cmp < 0) lo = mid + 1;
            else if (cmp > 0) hi = mid;
            else return mid;
        }
        return std::nullopt;
    }

private:
    int len_;
    std::vector<Letter> data_;
    std::size_t count_ = 0;
};

inline FlatWords enumerate_words_flat(const TruncatedShift& shift, int n,
                                      std::size_t cap = kDefaultWordCap) {
    if (n < 0) throw PreconditionError("enumerate_words_flat: negative length");
    std::vector<Letter> data;
    std::size_t count = 0;
    Word scratch;
    detail::foreach_word(shift, n, scratch, [&](const Word& w) {
        if (++count > cap)
            throw ResourceError("enumerate_words_flat: more than " + std::to_string(cap) +
                                " words of length " + std::to_string(n));
        data.insert(data.end(), w.begin(), w.end());
    });
    return FlatWords(n, std::move(data));
}

// All w of length n such that w . anchor is admissible.  Only the first letter
// of the anchor matters for the seam.
inline std::vector<Word> preimage_words(const TruncatedShift& shift, const Word& anchor, int n,
                                        std::size_t cap = kDefaultWordCap) {
    if (anchor.empty() && !shift.full_shift())
        throw PreconditionError("preimage_words: empty anchor on a non-full shift");
    if (n < 0) throw PreconditionError("preimage_words: negative length");
    if (n == 0) return {Word{}};
    std::vector<Word> out;
    Word scratch;
    detail::foreach_word(shift, n, scratch, [&](const Word& w) {
        if (!anchor.empty() && !shift.admissible(w.back(), anchor.front())) return;
        if (out.size() >= cap)
            throw ResourceError("preimage_words: cap exceeded");
        out.push_back(w);
    });
    return out;
}

struct PeriodicOrbit {
    Word word;  // length p, with word[p-1] -> word[0] admissible
    int period() const { return static_cast<int>(word.size()); }
};

// All admissible cyclic words of period p.  Rotations of the same orbit are
// retained as distinct entries; callers that need reduced orbits must dedup.
inline std::vector<PeriodicOrbit> enumerate_periodic_orbits(const TruncatedShift& shift, int p,
                                                            std::size_t cap = kDefaultWordCap) {
    if (p < 1) throw PreconditionError("enumerate_periodic_orbits: period must be >= 1");
    std::vector<PeriodicOrbit> out;
    Word scratch;
    detail::foreach_word(shift, p, scratch, [&](const Word& w) {
        if (!shift.admissible(w.back(), w.front())) return;
        if (out.size() >= cap)
            throw ResourceError("enumerate_periodic_orbits: cap exceeded");
        out.push_back(PeriodicOrbit{w});
    });
    return out;
}

struct IrreducibilityWitness {
    bool ok = false;
    std::vector<Word> connectors;          // the witness set, sorted, deduplicated
    std::pair<Letter, Letter> failing_pair{0, 0};
};

// Searches, for every ordered letter pair (i,j), a connecting word of length
// <= max_len making i.w.j admissible.  Witnesses are the shortest (then
// lexicographically least) connector per pair.
inline IrreducibilityWitness check_finitely_irreducible(const TruncatedShift& shift, int max_len,
                                                        std::size_t cap = kDefaultWordCap) {
    if (max_len < 0) throw PreconditionError("check_finitely_irreducible: negative max_len");
    IrreducibilityWitness rep;
    std::set<Word> found;
    for (Letter i = 1; i <= shift.letters(); ++i) {
        for (Letter j = 1; j <= shift.letters(); ++j) {
            bool connected = false;
            for (int len = 0; len <= max_len && !connected; ++len) {
                if (len == 0) {
                    if (shift.admissible(i, j)) {
                        found.insert(Word{});
                        connected = true;
                    }
                    continue;
                }
                Word scratch;
                detail::foreach_word(shift, len, scratch, [&](const Word& w) {
                    if (connected) return;
                    if (shift.admissible(i, w.front()) && shift.admissible(w.back(), j)) {
                        found.insert(w);
                        connected = true;
                    }
                });
                if (found.size() > cap)
                    throw ResourceError("check_finitely_irreducible: witness cap exceeded");
            }
            if (!connected) {
                rep.ok = false;
                rep.failing_pair = {i, j};
                return rep;
            }
        }
    }
    rep.ok = true;
    rep.connectors.assign(found.begin(), found.end());
    return rep;
}

} // namespace cms
