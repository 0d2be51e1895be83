#include "rfront/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "rfront/kernels.hpp"

namespace rfront {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Returns the offset of the first byte that is not part of valid UTF-8.
std::optional<std::size_t> invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  const auto* p = reinterpret_cast<const unsigned char*>(s.data());
  while (i < s.size()) {
    unsigned char c = p[i];
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::nullopt;
}

std::optional<int> parse_year(std::string_view text) {
  text = trim(text);
  int year = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), year);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return year;
}

void check_year(const RawRecord& r, std::size_t offset) {
  if (r.year && (*r.year < kMinYear || *r.year > kMaxYear))
    throw ParseError("year " + std::to_string(*r.year) + " outside [1800, 2100]", offset, r.uid);
}

void append_text(std::string& field, std::string_view value) {
  if (value.empty()) return;
  if (!field.empty()) field += ' ';
  field += value;
}

class TaggedParser {
 public:
  explicit TaggedParser(std::string_view input) : input_(input) {}

  std::vector<RawRecord> run() {
    std::size_t pos = 0;
    while (pos < input_.size()) {
      std::size_t end = input_.find('\n', pos);
      if (end == std::string_view::npos) end = input_.size();
      std::string_view line = input_.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      line_offset_ = pos;
      if (handle(line)) return finish();
      pos = end + 1;
    }
    return finish();
  }

 private:
  // Returns true at the end-of-file marker.
  bool handle(std::string_view line) {
    if (line.starts_with("   ")) {
      if (!open_) {
        if (trim(line).empty()) return false;
        throw ParseError("continuation line outside a record", line_offset_, "");
      }
      add(tag_, trim(line));
      return false;
    }
    if (trim(line).empty()) return false;
    std::string_view tag = line.substr(0, std::min<std::size_t>(2, line.size()));
    std::string_view value = line.size() > 2 ? trim(line.substr(2)) : std::string_view{};
    if (tag == "EF") {
      if (open_) throw ParseError("record not terminated by ER", block_offset_, current_.uid);
      return true;
    }
    if (tag == "ER") {
      if (!open_) throw ParseError("ER without an open record", line_offset_, "");
      close();
      return false;
    }
    if (tag == "FN" || tag == "VR") {
      if (open_) throw ParseError("file header inside a record", line_offset_, current_.uid);
      return false;
    }
    if (!open_) {
      open_ = true;
      block_offset_ = line_offset_;
      current_ = RawRecord{};
      seen_.clear();
    } else if (tag == "UT" && seen_.contains("UT")) {
      throw ParseError("record not terminated by ER", block_offset_, current_.uid);
    }
    tag_ = std::string(tag);
    seen_.insert(tag_);
    add(tag_, value);
    return false;
  }

  void add(const std::string& tag, std::string_view value) {
    RawRecord& r = current_;
    if (tag == "UT") {
      append_text(r.uid, value);
    } else if (tag == "TI") {
      append_text(r.title, value);
    } else if (tag == "AB") {
      append_text(r.abstract, value);
    } else if (tag == "SO") {
      append_text(r.source, value);
    } else if (tag == "PY") {
      if (value.empty()) return;
      auto y = parse_year(value);
      if (!y) throw ParseError("bad PY value '" + std::string(value) + "'", line_offset_, r.uid);
      r.year = y;
    } else if (tag == "DI") {
      if (!value.empty()) r.doi = std::string(value);
    } else if (tag == "VL") {
      if (!value.empty()) r.volume = std::string(value);
    } else if (tag == "BP") {
      if (!value.empty()) r.page = std::string(value);
    } else if (tag == "AU") {
      if (!value.empty()) r.authors.emplace_back(value);
    } else if (tag == "CR") {
      if (!value.empty()) r.cited_refs.emplace_back(value);
    }
  }

  void close() {
    if (current_.uid.empty()) throw ParseError("record without UT", block_offset_, "");
    if (!uids_.insert(current_.uid).second)
      throw ParseError("duplicate uid", block_offset_, current_.uid);
    check_year(current_, block_offset_);
    records_.push_back(std::move(current_));
    open_ = false;
  }

  std::vector<RawRecord> finish() {
    if (open_) throw ParseError("record not terminated by ER", block_offset_, current_.uid);
    return std::move(records_);
  }

  std::string_view input_;
  std::vector<RawRecord> records_;
  std::unordered_set<std::string> uids_;
  std::unordered_set<std::string> seen_;
  RawRecord current_;
  std::string tag_;
  bool open_ = false;
  std::size_t block_offset_ = 0;
  std::size_t line_offset_ = 0;
};

std::string string_field(const json& obj, const char* key, std::size_t offset,
                         const std::string& uid) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string())
    throw ParseError(std::string("field '") + key + "' is not a string", offset, uid);
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key, std::size_t offset,
                                           const std::string& uid) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return string_field(obj, key, offset, uid);
}

std::vector<std::string> string_list(const json& obj, const char* key, std::size_t offset,
                                     const std::string& uid) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array())
    throw ParseError(std::string("field '") + key + "' is not an array", offset, uid);
  for (const auto& v : *it) {
    if (!v.is_string())
      throw ParseError(std::string("field '") + key + "' has a non-string entry", offset, uid);
    out.push_back(v.get<std::string>());
  }
  return out;
}

RawRecord record_from_json(const json& obj, std::size_t offset) {
  if (!obj.is_object()) throw ParseError("line is not a JSON object", offset, "");
  RawRecord r;
  r.uid = string_field(obj, "uid", offset, "");
  if (r.uid.empty()) throw ParseError("record without uid", offset, "");
  r.title = string_field(obj, "title", offset, r.uid);
  r.abstract = string_field(obj, "abstract", offset, r.uid);
  if (auto it = obj.find("year"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw ParseError("year is not an integer", offset, r.uid);
    r.year = it->get<int>();
  }
  r.authors = string_list(obj, "authors", offset, r.uid);
  r.source = string_field(obj, "source", offset, r.uid);
  r.doi = optional_string(obj, "doi", offset, r.uid);
  r.cited_refs = string_list(obj, "cited_refs", offset, r.uid);
  r.volume = optional_string(obj, "volume", offset, r.uid);
  r.page = optional_string(obj, "page", offset, r.uid);
  check_year(r, offset);
  return r;
}

std::vector<RawRecord> parse_lines(std::string_view input) {
  std::vector<RawRecord> records;
  std::unordered_set<std::string> uids;
  std::size_t pos = 0;
  while (pos < input.size()) {
    std::size_t end = input.find('\n', pos);
    if (end == std::string_view::npos) end = input.size();
    std::string_view line = trim(input.substr(pos, end - pos));
    if (!line.empty()) {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), pos, "");
      }
      RawRecord r = record_from_json(obj, pos);
      if (!uids.insert(r.uid).second) throw ParseError("duplicate uid", pos, r.uid);
      records.push_back(std::move(r));
    }
    pos = end + 1;
  }
  return records;
}

// Lowercase and drop everything outside [a-z0-9].
std::string squash(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if ((l >= 'a' && l <= 'z') || (l >= '0' && l <= '9')) out += l;
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_year_token(std::string_view t) {
  return t.size() == 4 && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<std::string> doi_from_token(std::string_view token) {
  if (token.size() > 3 && (token[0] == 'D' || token[0] == 'd') && (token[1] == 'O' || token[1] == 'o') &&
      (token[2] == 'I' || token[2] == 'i')) {
    std::string_view rest = trim(token.substr(3));
    if (!rest.empty() && (rest.front() == ':')) rest = trim(rest.substr(1));
    if (!rest.empty()) return lower(rest);
    return std::nullopt;
  }
  if (token.starts_with("10.")) return lower(token);
  return std::nullopt;
}

std::string surname(std::string_view author) {
  author = trim(author);
  auto comma = author.find(',');
  if (comma != std::string_view::npos) return squash(author.substr(0, comma));
  auto space = author.find(' ');
  return squash(author.substr(0, space));
}

std::string composite(const std::string& author, const std::string& year, const std::string& source,
                      const std::string& volume, const std::string& page) {
  return author + '|' + year + '|' + source + '|' + volume + '|' + page;
}

}  // namespace

RecordFormat parse_format(std::string_view name) {
  if (name == "tagged") return RecordFormat::tagged;
  if (name == "lines") return RecordFormat::lines;
  throw std::invalid_argument("unknown record format '" + std::string(name) + "'");
}

std::vector<RawRecord> parse_records(std::string_view input, RecordFormat format) {
  if (auto bad = invalid_utf8(input)) throw ParseError("invalid UTF-8", *bad, "");
  if (input.starts_with("\xEF\xBB\xBF")) input.remove_prefix(3);
  if (format == RecordFormat::tagged) return TaggedParser(input).run();
  return parse_lines(input);
}

std::vector<RawRecord> parse_records(std::istream& in, RecordFormat format) {
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_records(data, format);
}

std::vector<RawRecord> read_records_file(const std::string& path, RecordFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_records(in, format);
}

void write_lines(std::ostream& out, const std::vector<RawRecord>& records) {
  for (const auto& r : records) {
    json obj = json::object();
    obj["uid"] = r.uid;
    obj["title"] = r.title;
    obj["abstract"] = r.abstract;
    obj["year"] = r.year ? json(*r.year) : json(nullptr);
    obj["authors"] = r.authors;
    obj["source"] = r.source;
    obj["doi"] = r.doi ? json(*r.doi) : json(nullptr);
    obj["cited_refs"] = r.cited_refs;
    if (r.volume) obj["volume"] = *r.volume;
    if (r.page) obj["page"] = *r.page;
    out << obj.dump() << '\n';
  }
}

void write_tagged(std::ostream& out, const std::vector<RawRecord>& records) {
  auto list = [&](const char* tag, const std::vector<std::string>& items) {
    for (std::size_t i = 0; i < items.size(); ++i) out << (i == 0 ? tag : "  ") << ' ' << items[i] << '\n';
  };
  out << "FN Clarivate Analytics Web of Science\nVR 1.0\n";
  for (const auto& r : records) {
    out << "UT " << r.uid << '\n';
    if (!r.title.empty()) out << "TI " << r.title << '\n';
    list("AU", r.authors);
    if (!r.source.empty()) out << "SO " << r.source << '\n';
    if (r.year) out << "PY " << *r.year << '\n';
    if (r.volume) out << "VL " << *r.volume << '\n';
    if (r.page) out << "BP " << *r.page << '\n';
    if (r.doi) out << "DI " << *r.doi << '\n';
    if (!r.abstract.empty()) out << "AB " << r.abstract << '\n';
    list("CR", r.cited_refs);
    out << "ER\n\n";
  }
  out << "EF\n";
}

std::optional<std::string> citation_key(std::string_view reference) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos <= reference.size()) {
    std::size_t end = reference.find(',', pos);
    if (end == std::string_view::npos) end = reference.size();
    tokens.push_back(trim(reference.substr(pos, end - pos)));
    pos = end + 1;
  }
  for (auto t : tokens)
    if (auto doi = doi_from_token(t)) return "doi:" + *doi;

  std::size_t year_at = tokens.size();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (is_year_token(tokens[i])) {
      year_at = i;
      break;
    }
  }
  if (year_at == tokens.size() || year_at == 0) return std::nullopt;
  std::string author = surname(tokens[0]);
  if (author.empty()) return std::nullopt;

  std::string source = year_at + 1 < tokens.size() ? squash(tokens[year_at + 1]) : std::string();
  std::string volume, page;
  for (std::size_t i = year_at + 2; i < tokens.size(); ++i) {
    std::string_view t = tokens[i];
    if (t.size() > 1 && (t[0] == 'V' || t[0] == 'v') && volume.empty() &&
        std::all_of(t.begin() + 1, t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      volume = std::string(t.substr(1));
    } else if (t.size() > 1 && (t[0] == 'P' || t[0] == 'p') && page.empty() &&
               std::all_of(t.begin() + 1, t.end(), [](char c) {
                 return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
               })) {
      page = squash(t.substr(1));
    }
  }
  return composite(author, std::string(tokens[year_at]), source, volume, page);
}

std::optional<std::string> citation_key(const RawRecord& record) {
  if (record.doi) {
    if (auto doi = doi_from_token(trim(*record.doi)); doi) return "doi:" + *doi;
    std::string_view d = trim(*record.doi);
    if (!d.empty()) return "doi:" + lower(d);
  }
  if (record.authors.empty() || !record.year) return std::nullopt;
  std::string author = surname(record.authors.front());
  if (author.empty()) return std::nullopt;
  return composite(author, std::to_string(*record.year), squash(record.source),
                   record.volume ? squash(*record.volume) : std::string(),
                   record.page ? squash(*record.page) : std::string());
}

Corpus resolve_citations(std::vector<RawRecord> records) {
  {
    std::unordered_set<std::string_view> seen;
    for (const auto& r : records)
      if (!seen.insert(r.uid).second) throw DataError("duplicate uid '" + r.uid + "'");
  }
  const auto own_keys = kernels::record_keys_omp(records);
  const auto ref_keys = kernels::reference_keys_omp(records);

  constexpr std::size_t kAmbiguous = static_cast<std::size_t>(-1);
  std::unordered_map<std::string_view, std::size_t> owner;
  owner.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!own_keys[i]) continue;
    auto [it, inserted] = owner.try_emplace(*own_keys[i], i);
    if (!inserted) it->second = kAmbiguous;
  }

  Corpus corpus;
  ResolutionStats& st = corpus.stats;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::vector<std::size_t> targets;
    for (const auto& key : ref_keys[i]) {
      ++st.total_refs;
      if (!key) {
        ++st.no_key;
        continue;
      }
      auto it = owner.find(*key);
      if (it == owner.end()) {
        ++st.unmatched;
      } else if (it->second == kAmbiguous) {
        ++st.ambiguous;
      } else if (it->second == i) {
        ++st.self;
      } else if (std::find(targets.begin(), targets.end(), it->second) != targets.end()) {
        ++st.duplicate;
      } else {
        ++st.resolved;
        targets.push_back(it->second);
      }
    }
    for (auto t : targets) pairs.emplace_back(i, t);
  }
  corpus.unresolved_count = st.no_key + st.unmatched + st.ambiguous;
  corpus.links.reserve(pairs.size());
  for (auto [a, b] : pairs) corpus.links.push_back({records[a].uid, records[b].uid});
  std::sort(corpus.links.begin(), corpus.links.end());
  corpus.records = std::move(records);
  return corpus;
}

}  // namespace rfront
