#pragma once

// Finite relational structures over a split vocabulary: EDB relations fixed
// by the input, monadic registers holding at most one element each.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace promise {

using ElementId = std::int32_t;

/// Register contents are stored as raw ids; kBlank marks an empty register.
inline constexpr ElementId kBlank = -1;

inline constexpr std::string_view kAdom = "adom";

struct EdbSymbol {
    std::string name;
    int arity = 0;

    bool operator==(const EdbSymbol&) const = default;
};

class Vocabulary {
public:
    void add_edb(std::string name, int arity);
    void add_register(std::string name);

    [[nodiscard]] const std::vector<EdbSymbol>& edb() const noexcept { return edb_; }
    [[nodiscard]] const std::vector<std::string>& registers() const noexcept { return registers_; }

    [[nodiscard]] std::optional<std::size_t> find_edb(std::string_view name) const;
    [[nodiscard]] std::optional<std::size_t> find_register(std::string_view name) const;
    [[nodiscard]] bool declares(std::string_view name) const;

    /// Same symbols with the same arities, declaration order ignored.
    [[nodiscard]] bool compatible_with(const Vocabulary& other) const;

    bool operator==(const Vocabulary&) const = default;

private:
    std::vector<EdbSymbol> edb_;
    std::vector<std::string> registers_;
};

class RegisterValue {
public:
    static RegisterValue blank() noexcept { return RegisterValue{kBlank}; }
    static RegisterValue element(ElementId e) noexcept { return RegisterValue{e}; }

    [[nodiscard]] bool is_blank() const noexcept { return id_ == kBlank; }
    [[nodiscard]] ElementId id() const noexcept { return id_; }

    bool operator==(const RegisterValue&) const = default;

private:
    explicit RegisterValue(ElementId id) noexcept : id_(id) {}
    ElementId id_;
};

/// An EDB relation: tuples kept sorted and unique, with a per-column index.
class Relation {
public:
    Relation(int arity, std::vector<std::vector<ElementId>> tuples, std::size_t domain_size);

    [[nodiscard]] int arity() const noexcept { return arity_; }
    [[nodiscard]] const std::vector<std::vector<ElementId>>& tuples() const noexcept { return tuples_; }
    [[nodiscard]] bool contains(std::span<const ElementId> tuple) const;
    /// Indices into tuples() whose column `column` holds `value`.
    [[nodiscard]] const std::vector<std::uint32_t>& with(int column, ElementId value) const;

    bool operator==(const Relation& other) const { return arity_ == other.arity_ && tuples_ == other.tuples_; }

private:
    int arity_;
    std::vector<std::vector<ElementId>> tuples_;
    std::vector<std::vector<std::vector<std::uint32_t>>> index_;
};

/// The immutable part of every letter of a trace: vocabulary, domain, EDB.
class Database {
public:
    Database(Vocabulary vocabulary, std::vector<std::string> domain,
             std::vector<std::vector<std::vector<ElementId>>> edb_tuples);

    [[nodiscard]] const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
    [[nodiscard]] const std::vector<std::string>& domain() const noexcept { return domain_; }
    [[nodiscard]] std::size_t domain_size() const noexcept { return domain_.size(); }
    [[nodiscard]] std::size_t register_count() const noexcept { return vocabulary_.registers().size(); }
    [[nodiscard]] const Relation& relation(std::size_t edb_index) const { return relations_.at(edb_index); }
    [[nodiscard]] std::optional<ElementId> find_element(std::string_view name) const;
    [[nodiscard]] const std::string& element_name(ElementId e) const { return domain_.at(static_cast<std::size_t>(e)); }

    bool operator==(const Database& other) const;

private:
    Vocabulary vocabulary_;
    std::vector<std::string> domain_;
    std::map<std::string, ElementId, std::less<>> element_ids_;
    std::vector<Relation> relations_;
};

/// One letter: the shared database plus a register valuation.
class Structure {
public:
    Structure(std::shared_ptr<const Database> db, std::vector<ElementId> registers);
    /// All registers Blank.
    explicit Structure(std::shared_ptr<const Database> db);

    [[nodiscard]] const Database& db() const noexcept { return *db_; }
    [[nodiscard]] const std::shared_ptr<const Database>& db_ptr() const noexcept { return db_; }
    [[nodiscard]] const Vocabulary& vocabulary() const noexcept { return db_->vocabulary(); }
    [[nodiscard]] std::span<const ElementId> registers() const noexcept { return registers_; }
    [[nodiscard]] RegisterValue value(std::size_t reg) const;
    [[nodiscard]] RegisterValue value(std::string_view reg) const;

    [[nodiscard]] Structure with_register(std::size_t reg, RegisterValue v) const;

private:
    std::shared_ptr<const Database> db_;
    std::vector<ElementId> registers_;
};

Structure parse_structure(std::string_view text);
std::string serialize_structure(const Structure& s);

/// The full declared domain, in declaration order.
std::vector<ElementId> active_domain(const Structure& s);

/// `perm[e]` is the image of element e.
Structure permute_structure(const Structure& s, std::span<const ElementId> perm);

/// Throws VocabularyMismatch if the vocabularies differ.
bool structures_equal(const Structure& a, const Structure& b);

} // namespace promise
