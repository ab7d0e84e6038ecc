#include "acbr/lexicon.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "acbr/error.hpp"
#include "acbr/segmenter.hpp"

namespace acbr {

namespace {

std::string trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_phrase(std::string const& term)
{
    std::vector<std::string> words;
    std::istringstream in(term);
    std::string w;
    while (in >> w) {
        words.push_back(w);
    }
    return words;
}

std::string normalize_term(std::string const& raw)
{
    std::string out;
    for (auto const& word : split_phrase(raw)) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += fold_case(word);
    }
    return out;
}

}  // namespace

lexicon::lexicon(std::vector<topic> topics) : m_topics(std::move(topics))
{
    if (m_topics.empty()) {
        throw format_error("lexicon: no topics");
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < m_topics.size(); ++i) {
        auto& t = m_topics[i];
        if (t.name.empty()) {
            throw format_error("lexicon: empty topic name");
        }
        if (t.name.find_first_of("\t\n") != std::string::npos) {
            throw format_error("lexicon: topic name contains TAB or newline");
        }
        if (!names.insert(t.name).second) {
            throw format_error("lexicon: duplicate topic '" + t.name + "'");
        }
        if (t.miscellaneous) {
            if (m_misc) {
                throw format_error("lexicon: more than one miscellaneous topic");
            }
            if (!t.terms.empty()) {
                throw format_error("lexicon: miscellaneous topic '" + t.name + "' lists terms");
            }
            m_misc = i;
        }

        std::vector<std::string> unique;
        std::set<std::string> seen;
        for (auto const& raw : t.terms) {
            if (raw.find(',') != std::string::npos) {
                throw format_error("lexicon: term '" + raw + "' contains a comma");
            }
            auto term = normalize_term(raw);
            if (!term.empty() && seen.insert(term).second) {
                unique.push_back(std::move(term));
            }
        }
        t.terms = std::move(unique);
        if (!t.miscellaneous && t.terms.empty()) {
            throw format_error("lexicon: topic '" + t.name + "' has no terms");
        }
    }

    m_tables.resize(m_topics.size());
    for (std::size_t i = 0; i < m_topics.size(); ++i) {
        for (auto const& term : m_topics[i].terms) {
            auto words = split_phrase(term);
            m_tables[i][words.front()].push_back(std::move(words));
        }
        for (auto& [first, phrases] : m_tables[i]) {
            std::stable_sort(phrases.begin(), phrases.end(), [](auto const& a, auto const& b) {
                return a.size() > b.size();
            });
        }
    }
}

lexicon lexicon::parse(std::string_view text)
{
    std::vector<topic> topics;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty() || line.front() == '#') {
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw format_error("lexicon line " + std::to_string(line_no) + ": missing TAB separator");
        }
        topic t;
        t.name = trim(std::string_view(line).substr(0, tab));
        auto rest = trim(std::string_view(line).substr(tab + 1));
        if (rest == "*") {
            t.miscellaneous = true;
        } else {
            std::size_t start = 0;
            while (start <= rest.size()) {
                auto comma = rest.find(',', start);
                auto end = comma == std::string::npos ? rest.size() : comma;
                auto term = trim(std::string_view(rest).substr(start, end - start));
                if (!term.empty()) {
                    t.terms.push_back(std::move(term));
                }
                if (comma == std::string::npos) {
                    break;
                }
                start = comma + 1;
            }
        }
        topics.push_back(std::move(t));
    }
    return lexicon(std::move(topics));
}

lexicon lexicon::load(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open lexicon " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string lexicon::serialize() const
{
    std::string out;
    for (auto const& t : m_topics) {
        out += t.name;
        out.push_back('\t');
        if (t.miscellaneous) {
            out.push_back('*');
        } else {
            for (std::size_t i = 0; i < t.terms.size(); ++i) {
                if (i > 0) {
                    out.push_back(',');
                }
                out += t.terms[i];
            }
        }
        out.push_back('\n');
    }
    return out;
}

std::string lexicon::fingerprint() const
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize()) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::size_t lexicon::scan_topic(std::span<std::string const> tokens, std::size_t index,
                                std::vector<char>* covered) const
{
    auto const& table = m_tables[index];
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t matched = 0;
        if (auto it = table.find(tokens[i]); it != table.end()) {
            for (auto const& p : it->second) {
                if (i + p.size() <= tokens.size()
                    && std::equal(p.begin(), p.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
                    matched = p.size();
                    break;
                }
            }
        }
        if (matched == 0) {
            ++i;
            continue;
        }
        ++count;
        if (covered != nullptr) {
            std::fill_n(covered->begin() + static_cast<std::ptrdiff_t>(i), matched, char{1});
        }
        i += matched;
    }
    return count;
}

std::vector<std::size_t> lexicon::match_counts(std::span<std::string const> tokens) const
{
    std::vector<std::size_t> counts(m_topics.size(), 0);
    std::vector<char> covered(tokens.size(), 0);
    for (std::size_t i = 0; i < m_topics.size(); ++i) {
        if (!m_topics[i].miscellaneous) {
            counts[i] = scan_topic(tokens, i, &covered);
        }
    }
    if (m_misc) {
        counts[*m_misc] = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), 0));
    }
    return counts;
}

std::size_t lexicon::match_count(std::span<std::string const> tokens, std::size_t index) const
{
    if (m_topics.at(index).miscellaneous) {
        return match_counts(tokens)[index];
    }
    return scan_topic(tokens, index, nullptr);
}

}  // namespace acbr
