#pragma once

// Bounded search for successful executions of a program term, witness
// extraction and deterministic witness replay.

#include "promise/module.hpp"
#include "promise/program.hpp"
#include "promise/structure.hpp"
#include "promise/term.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace promise {

enum class Tri { True, False, Unknown };

std::string_view to_string(Tri t);

/// (length, concatenated register valuations): a comparable trace value.
using TraceKey = std::pair<std::size_t, std::vector<ElementId>>;

/// A nonempty string of letters over one database. Keeps per-register value
/// occurrence counts so history tests are constant time.
class Trace {
public:
    explicit Trace(const Structure& input);
    Trace(std::shared_ptr<const Database> db, const TraceKey& key);

    [[nodiscard]] std::size_t length() const noexcept { return length_; }
    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] const Database& db() const noexcept { return *db_; }
    [[nodiscard]] const std::shared_ptr<const Database>& db_ptr() const noexcept { return db_; }

    [[nodiscard]] std::span<const ElementId> letter(std::size_t i) const {
        return {letters_.data() + i * width_, width_};
    }
    [[nodiscard]] std::span<const ElementId> last() const { return letter(length_ - 1); }
    [[nodiscard]] Structure letter_structure(std::size_t i) const;

    void push(std::span<const ElementId> regs);
    void pop();
    void truncate(std::size_t length);

    /// Letters (all of them) in which register `reg` holds `value`.
    [[nodiscard]] std::size_t occurrences(std::size_t reg, ElementId value) const {
        return counts_[reg * stride_ + static_cast<std::size_t>(value + 1)];
    }

    [[nodiscard]] TraceKey key() const { return {length_, letters_}; }

private:
    std::shared_ptr<const Database> db_;
    std::size_t width_ = 0;
    std::size_t stride_ = 0;
    std::size_t length_ = 0;
    std::vector<ElementId> letters_;
    std::vector<std::uint32_t> counts_;
};

struct SearchConfig {
    int k = 2;
    std::optional<std::size_t> max_trace_length;
    std::optional<std::size_t> max_witness_length;
    std::optional<int> max_antidomain_depth;
    std::size_t witness_limit = 1000;
    /// Falls back to PROMISE_MAX_NODES, then to a built-in budget.
    std::optional<std::uint64_t> max_nodes;
};

/// Concrete limits for one run.
struct Bounds {
    std::size_t trace_cap = 0;
    std::size_t witness_cap = 0;
    int depth_cap = 0;
    std::uint64_t node_cap = 0;
};

/// Exploration uses (n+1)^k + 1 letters so that definedness tests near the
/// end of an n^k witness can still be decided; accepted witnesses must stay
/// within n^k added letters.
Bounds resolve_bounds(const SearchConfig& cfg, std::size_t domain_size, const Term& core);

/// A unary symbol resolved against a database: a register, or a fixed set
/// given by a code (-1 empty, e for {e}, <= -2 for larger sets).
struct UnarySym {
    bool is_register = false;
    std::size_t reg = 0;
    ElementId code = kBlank;
};

/// A program bound to one database: modules compiled, core term flattened.
class BoundProgram {
public:
    struct Node {
        TermOp op = TermOp::Id;
        int a = -1, b = -1;
        std::size_t module = 0;
        UnarySym p, q;
    };

    BoundProgram(const Program& p, std::shared_ptr<const Database> db);

    /// Adds a core term; returns its root node.
    int add_term(const Term& core);

    [[nodiscard]] const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] const CompiledModule& module(std::size_t i) const { return modules_[i]; }
    [[nodiscard]] std::optional<std::size_t> find_module(std::string_view name) const;
    [[nodiscard]] const Database& db() const noexcept { return *db_; }
    [[nodiscard]] const std::shared_ptr<const Database>& db_ptr() const noexcept { return db_; }

    [[nodiscard]] UnarySym resolve_unary(std::string_view name) const;

private:
    std::shared_ptr<const Database> db_;
    std::vector<CompiledModule> modules_;
    std::vector<std::string> module_names_;
    std::vector<Node> nodes_;
    std::vector<std::pair<std::string, ElementId>> constant_codes_;
};

struct Witness {
    int k = 2;
    std::vector<Choice> choices;
    std::size_t final_length = 1;

    bool operator==(const Witness&) const = default;
};

enum class VerdictKind { Yes, No, BoundExceeded };

std::string_view to_string(VerdictKind v);

struct Verdict {
    VerdictKind kind = VerdictKind::No;
    std::optional<Witness> witness;
    std::uint64_t nodes = 0;
    Bounds bounds;
};

struct DeltaResult {
    std::set<TraceKey> extensions;
    bool complete = true;
};

/// Every extension of `s` by core term `t` within bounds.
DeltaResult eval_deltas(const Program& p, const TermPtr& core, const Trace& s, const SearchConfig& cfg);

Tri holds_antidomain(const Program& p, const TermPtr& core, const Trace& s, const SearchConfig& cfg);

/// Set interpretations at the last letter. Throws NonUnarySymbolInTest.
bool check_eq(std::string_view p, std::string_view q, const Trace& s);
/// Q at every strictly earlier letter differs from P at the last letter.
bool check_bg(std::string_view p, std::string_view q, const Trace& s);

Verdict run_main_task(const Program& p, const Structure& input, const SearchConfig& cfg = {});

std::vector<Witness> enumerate_witnesses(const Program& p, const Structure& input, const SearchConfig& cfg = {});

enum class VerifyFailure {
    None,
    HashMismatch,
    ChoiceMismatch,
    DerivationFailed,
    UnconsumedChoices,
    LengthMismatch,
    LengthBound,
    Undecided,
};

std::string_view to_string(VerifyFailure f);

struct VerifyResult {
    bool ok = false;
    VerifyFailure failure = VerifyFailure::None;
    std::string detail;

    explicit operator bool() const noexcept { return ok; }
};

/// Replays the recorded choices; nested searches happen only inside
/// anti-domain, preferential-union and iterate-termination tests.
VerifyResult verify_witness(const Program& p, const Structure& input, const Witness& w);

std::size_t witness_length(const Witness& w);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

std::string witness_to_json(const Witness& w, std::string_view program_text, std::string_view structure_text);

struct WitnessFile {
    std::string program_hash;
    std::string input_hash;
    Witness witness;
};

/// Throws SyntaxError on malformed JSON or a wrong shape.
WitnessFile witness_from_json(std::string_view json);

/// Hash check, then replay.
VerifyResult verify_witness_file(std::string_view program_text, std::string_view structure_text,
                                 std::string_view witness_json);

} // namespace promise
