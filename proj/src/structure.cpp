#include "promise/structure.hpp"

#include "promise/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace promise {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string at_line(std::size_t line_no, const std::string& msg) {
    return "line " + std::to_string(line_no) + ": " + msg;
}

bool is_identifier(std::string_view s) {
    if (s.empty())
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-' || c == '.';
    });
}

} // namespace

// --- Vocabulary -----------------------------------------------------------

void Vocabulary::add_edb(std::string name, int arity) {
    if (name == kAdom)
        throw Error(ErrorKind::DuplicateSymbol, "'adom' is reserved");
    if (arity < 1)
        throw Error(ErrorKind::Arity, "EDB symbol " + name + " must have arity >= 1");
    if (declares(name))
        throw Error(ErrorKind::DuplicateSymbol, name);
    edb_.push_back({std::move(name), arity});
}

void Vocabulary::add_register(std::string name) {
    if (name == kAdom)
        throw Error(ErrorKind::DuplicateSymbol, "'adom' is reserved");
    if (declares(name))
        throw Error(ErrorKind::DuplicateSymbol, name);
    registers_.push_back(std::move(name));
}

std::optional<std::size_t> Vocabulary::find_edb(std::string_view name) const {
    for (std::size_t i = 0; i < edb_.size(); ++i)
        if (edb_[i].name == name)
            return i;
    return std::nullopt;
}

std::optional<std::size_t> Vocabulary::find_register(std::string_view name) const {
    for (std::size_t i = 0; i < registers_.size(); ++i)
        if (registers_[i] == name)
            return i;
    return std::nullopt;
}

bool Vocabulary::declares(std::string_view name) const {
    return find_edb(name).has_value() || find_register(name).has_value();
}

bool Vocabulary::compatible_with(const Vocabulary& other) const {
    if (edb_.size() != other.edb_.size() || registers_.size() != other.registers_.size())
        return false;
    for (const auto& sym : edb_) {
        auto j = other.find_edb(sym.name);
        if (!j || other.edb_[*j].arity != sym.arity)
            return false;
    }
    return std::all_of(registers_.begin(), registers_.end(),
                       [&](const std::string& r) { return other.find_register(r).has_value(); });
}

// --- Relation -------------------------------------------------------------

Relation::Relation(int arity, std::vector<std::vector<ElementId>> tuples, std::size_t domain_size)
    : arity_(arity), tuples_(std::move(tuples)) {
    for (const auto& t : tuples_) {
        if (static_cast<int>(t.size()) != arity_)
            throw Error(ErrorKind::Arity, "tuple of length " + std::to_string(t.size()) + " for arity " +
                                              std::to_string(arity_));
        for (ElementId e : t)
            if (e < 0 || static_cast<std::size_t>(e) >= domain_size)
                throw Error(ErrorKind::UnknownSymbol, "element id out of range");
    }
    std::sort(tuples_.begin(), tuples_.end());
    tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
    index_.assign(static_cast<std::size_t>(arity_), std::vector<std::vector<std::uint32_t>>(domain_size));
    for (std::uint32_t i = 0; i < tuples_.size(); ++i)
        for (int c = 0; c < arity_; ++c)
            index_[static_cast<std::size_t>(c)][static_cast<std::size_t>(tuples_[i][static_cast<std::size_t>(c)])].push_back(i);
}

bool Relation::contains(std::span<const ElementId> tuple) const {
    auto it = std::lower_bound(tuples_.begin(), tuples_.end(), tuple,
                               [](const std::vector<ElementId>& a, std::span<const ElementId> b) {
                                   return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                               });
    return it != tuples_.end() && std::equal(it->begin(), it->end(), tuple.begin(), tuple.end());
}

const std::vector<std::uint32_t>& Relation::with(int column, ElementId value) const {
    return index_.at(static_cast<std::size_t>(column)).at(static_cast<std::size_t>(value));
}

// --- Database -------------------------------------------------------------

Database::Database(Vocabulary vocabulary, std::vector<std::string> domain,
                   std::vector<std::vector<std::vector<ElementId>>> edb_tuples)
    : vocabulary_(std::move(vocabulary)), domain_(std::move(domain)) {
    for (std::size_t i = 0; i < domain_.size(); ++i) {
        if (!element_ids_.emplace(domain_[i], static_cast<ElementId>(i)).second)
            throw Error(ErrorKind::DuplicateSymbol, "element " + domain_[i]);
    }
    if (edb_tuples.size() != vocabulary_.edb().size())
        throw Error(ErrorKind::Arity, "EDB interpretation count does not match the vocabulary");
    relations_.reserve(edb_tuples.size());
    for (std::size_t i = 0; i < edb_tuples.size(); ++i)
        relations_.emplace_back(vocabulary_.edb()[i].arity, std::move(edb_tuples[i]), domain_.size());
}

std::optional<ElementId> Database::find_element(std::string_view name) const {
    auto it = element_ids_.find(name);
    if (it == element_ids_.end())
        return std::nullopt;
    return it->second;
}

bool Database::operator==(const Database& other) const {
    return this == &other ||
           (vocabulary_ == other.vocabulary_ && domain_ == other.domain_ && relations_ == other.relations_);
}

// --- Structure ------------------------------------------------------------

Structure::Structure(std::shared_ptr<const Database> db, std::vector<ElementId> registers)
    : db_(std::move(db)), registers_(std::move(registers)) {
    if (registers_.size() != db_->register_count())
        throw Error(ErrorKind::Arity, "register valuation has the wrong width");
    for (ElementId e : registers_)
        if (e != kBlank && (e < 0 || static_cast<std::size_t>(e) >= db_->domain_size()))
            throw Error(ErrorKind::UnknownSymbol, "register value out of domain");
}

Structure::Structure(std::shared_ptr<const Database> db)
    : Structure(db, std::vector<ElementId>(db->register_count(), kBlank)) {}

RegisterValue Structure::value(std::size_t reg) const {
    ElementId e = registers_.at(reg);
    return e == kBlank ? RegisterValue::blank() : RegisterValue::element(e);
}

RegisterValue Structure::value(std::string_view reg) const {
    auto idx = vocabulary().find_register(reg);
    if (!idx)
        throw Error(ErrorKind::UnknownSymbol, std::string(reg));
    return value(*idx);
}

Structure Structure::with_register(std::size_t reg, RegisterValue v) const {
    auto regs = registers_;
    regs.at(reg) = v.id();
    return Structure(db_, std::move(regs));
}

// --- text format ----------------------------------------------------------

Structure parse_structure(std::string_view text) {
    struct EdbBlock {
        std::string name;
        int arity;
        std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    };
    std::optional<std::vector<std::string>> domain;
    std::vector<EdbBlock> blocks;
    std::vector<std::string> regs;
    std::vector<std::pair<std::size_t, std::string>> states;
    bool in_edb = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto tokens = split_ws(line);
        if (tokens.empty())
            continue;
        bool indented = line.front() == ' ' || line.front() == '\t';
        if (indented) {
            if (!in_edb)
                throw Error(ErrorKind::Syntax, at_line(line_no, "indented line outside an edb block"));
            blocks.back().rows.emplace_back(line_no, std::move(tokens));
            continue;
        }
        in_edb = false;
        const std::string& head = tokens[0];
        if (head == "domain") {
            if (domain)
                throw Error(ErrorKind::Syntax, at_line(line_no, "more than one domain line"));
            domain.emplace(tokens.begin() + 1, tokens.end());
        } else if (head == "edb") {
            if (tokens.size() != 3)
                throw Error(ErrorKind::Syntax, at_line(line_no, "expected 'edb <Name> <arity>'"));
            int arity = 0;
            try {
                std::size_t used = 0;
                arity = std::stoi(tokens[2], &used);
                if (used != tokens[2].size())
                    throw std::invalid_argument("arity");
            } catch (const std::exception&) {
                throw Error(ErrorKind::Syntax, at_line(line_no, "bad arity '" + tokens[2] + "'"));
            }
            if (!is_identifier(tokens[1]))
                throw Error(ErrorKind::Syntax, at_line(line_no, "bad symbol name '" + tokens[1] + "'"));
            blocks.push_back({tokens[1], arity, {}});
            in_edb = true;
        } else if (head == "reg") {
            if (tokens.size() < 2)
                throw Error(ErrorKind::Syntax, at_line(line_no, "expected 'reg <R> ...'"));
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                if (!is_identifier(tokens[i]))
                    throw Error(ErrorKind::Syntax, at_line(line_no, "bad register name '" + tokens[i] + "'"));
                regs.push_back(tokens[i]);
            }
        } else if (head == "state") {
            if (tokens.size() < 2)
                throw Error(ErrorKind::Syntax, at_line(line_no, "expected 'state <R>=<e|_>'"));
            for (std::size_t i = 1; i < tokens.size(); ++i)
                states.emplace_back(line_no, tokens[i]);
        } else {
            throw Error(ErrorKind::Syntax, at_line(line_no, "unexpected '" + head + "'"));
        }
    }
    if (!domain)
        throw Error(ErrorKind::Syntax, "missing domain line");

    Vocabulary vocab;
    for (const auto& b : blocks)
        vocab.add_edb(b.name, b.arity);
    for (const auto& r : regs)
        vocab.add_register(r);

    std::map<std::string, ElementId, std::less<>> ids;
    for (std::size_t i = 0; i < domain->size(); ++i) {
        const auto& name = (*domain)[i];
        if (name == "_" || !is_identifier(name))
            throw Error(ErrorKind::Syntax, "bad element name '" + name + "'");
        if (!ids.emplace(name, static_cast<ElementId>(i)).second)
            throw Error(ErrorKind::DuplicateSymbol, "element " + name);
    }
    auto resolve = [&](std::size_t line, const std::string& name) {
        auto it = ids.find(name);
        if (it == ids.end())
            throw Error(ErrorKind::UnknownSymbol, at_line(line, "undeclared element '" + name + "'"));
        return it->second;
    };

    std::vector<std::vector<std::vector<ElementId>>> tuples(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (const auto& [line, row] : blocks[b].rows) {
            if (static_cast<int>(row.size()) != blocks[b].arity)
                throw Error(ErrorKind::Arity, at_line(line, blocks[b].name + " has arity " +
                                                                std::to_string(blocks[b].arity) + ", got " +
                                                                std::to_string(row.size()) + " elements"));
            std::vector<ElementId> t;
            for (const auto& e : row)
                t.push_back(resolve(line, e));
            tuples[b].push_back(std::move(t));
        }
    }
    auto db = std::make_shared<const Database>(std::move(vocab), std::move(*domain), std::move(tuples));
    std::vector<ElementId> valuation(db->register_count(), kBlank);
    for (const auto& [line, assignment] : states) {
        auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::Syntax, at_line(line, "expected <R>=<e|_>, got '" + assignment + "'"));
        auto reg = db->vocabulary().find_register(std::string_view(assignment).substr(0, eq));
        if (!reg)
            throw Error(ErrorKind::UnknownSymbol, at_line(line, "undeclared register in '" + assignment + "'"));
        std::string value = assignment.substr(eq + 1);
        valuation[*reg] = value == "_" ? kBlank : resolve(line, value);
    }
    return Structure(std::move(db), std::move(valuation));
}

std::string serialize_structure(const Structure& s) {
    const Database& db = s.db();
    std::ostringstream out;
    out << "domain";
    for (const auto& e : db.domain())
        out << ' ' << e;
    out << '\n';
    const auto& vocab = db.vocabulary();
    for (std::size_t i = 0; i < vocab.edb().size(); ++i) {
        out << "edb " << vocab.edb()[i].name << ' ' << vocab.edb()[i].arity << '\n';
        for (const auto& t : db.relation(i).tuples()) {
            for (ElementId e : t)
                out << ' ' << db.element_name(e);
            out << '\n';
        }
    }
    if (!vocab.registers().empty()) {
        out << "reg";
        for (const auto& r : vocab.registers())
            out << ' ' << r;
        out << '\n';
    }
    for (std::size_t r = 0; r < vocab.registers().size(); ++r) {
        ElementId e = s.registers()[r];
        if (e != kBlank)
            out << "state " << vocab.registers()[r] << '=' << db.element_name(e) << '\n';
    }
    return out.str();
}

std::vector<ElementId> active_domain(const Structure& s) {
    std::vector<ElementId> out(s.db().domain_size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<ElementId>(i);
    return out;
}

Structure permute_structure(const Structure& s, std::span<const ElementId> perm) {
    const Database& db = s.db();
    const std::size_t n = db.domain_size();
    if (perm.size() != n)
        throw Error(ErrorKind::NotABijection, "permutation size differs from the domain size");
    std::vector<bool> hit(n, false);
    for (ElementId e : perm) {
        if (e < 0 || static_cast<std::size_t>(e) >= n || hit[static_cast<std::size_t>(e)])
            throw Error(ErrorKind::NotABijection, "not a permutation of the domain");
        hit[static_cast<std::size_t>(e)] = true;
    }
    std::vector<std::vector<std::vector<ElementId>>> tuples;
    for (std::size_t i = 0; i < db.vocabulary().edb().size(); ++i) {
        auto& rel = tuples.emplace_back();
        for (const auto& t : db.relation(i).tuples()) {
            auto& renamed = rel.emplace_back();
            for (ElementId e : t)
                renamed.push_back(perm[static_cast<std::size_t>(e)]);
        }
    }
    auto out_db = std::make_shared<const Database>(db.vocabulary(), db.domain(), std::move(tuples));
    std::vector<ElementId> regs(s.registers().begin(), s.registers().end());
    for (auto& e : regs)
        if (e != kBlank)
            e = perm[static_cast<std::size_t>(e)];
    return Structure(std::move(out_db), std::move(regs));
}

bool structures_equal(const Structure& a, const Structure& b) {
    if (!(a.vocabulary() == b.vocabulary()))
        throw Error(ErrorKind::VocabularyMismatch, "structures over different vocabularies");
    if (!(a.db() == b.db()))
        return false;
    return std::equal(a.registers().begin(), a.registers().end(), b.registers().begin(), b.registers().end());
}

} // namespace promise
