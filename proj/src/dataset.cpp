#include "sdgar/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "sdgar/errors.hpp"

namespace sdgar {

namespace {

struct RawRecord {
  std::string context;
  std::string item;
  std::optional<Real> rating;
};

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

InteractionDataset from_records(const std::vector<RawRecord>& records,
                                std::optional<Real> rating_threshold) {
  InteractionDataset ds;
  std::unordered_map<std::string, Index> context_index;
  std::unordered_map<std::string, Index> item_index;
  std::vector<std::set<Index>> per_context;

  for (const auto& rec : records) {
    if (rating_threshold && !(*rec.rating > *rating_threshold)) {
      continue;
    }
    auto [cit, cnew] =
        context_index.try_emplace(rec.context, static_cast<Index>(ds.context_ids.size()));
    if (cnew) {
      ds.context_ids.push_back(rec.context);
      per_context.emplace_back();
    }
    auto [iit, inew] =
        item_index.try_emplace(rec.item, static_cast<Index>(ds.item_ids.size()));
    if (inew) {
      ds.item_ids.push_back(rec.item);
    }
    per_context[static_cast<std::size_t>(cit->second)].insert(iit->second);
  }

  ds.num_contexts = static_cast<Index>(ds.context_ids.size());
  ds.num_items = static_cast<Index>(ds.item_ids.size());
  ds.positives.reserve(per_context.size());
  for (auto& s : per_context) {
    ds.positives.emplace_back(s.begin(), s.end());
  }
  return ds;
}

void append_interactions(std::vector<RawRecord>& out, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  Index line_no = 0;
  std::optional<char> sep;
  std::optional<bool> has_rating;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (!sep) sep = line.find('\t') != std::string::npos ? '\t' : ',';
    const auto fields = split_fields(line, *sep);
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() ||
        fields[1].empty()) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": malformed record (expected context, item[, rating])");
    }
    if (!has_rating) has_rating = fields.size() == 3;
    if (*has_rating != (fields.size() == 3)) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": inconsistent field count");
    }

    RawRecord rec;
    rec.context = fields[0];
    rec.item = fields[1];
    if (fields.size() == 3) {
      try {
        std::size_t consumed = 0;
        rec.rating = std::stod(fields[2], &consumed);
        if (consumed != fields[2].size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": malformed rating '" + fields[2] + "'");
      }
    }
    out.push_back(std::move(rec));
  }
}

}  // namespace

InteractionDataset load_interactions(const std::string& path,
                                     std::optional<Real> rating_threshold) {
  std::vector<RawRecord> records;
  append_interactions(records, path);
  if (rating_threshold && !records.empty() && !records.front().rating) {
    throw ConfigError("rating threshold supplied but " + path +
                      " has no rating column");
  }
  return from_records(records, rating_threshold);
}

InteractionDataset filter_min_interactions(const InteractionDataset& ds,
                                           Index min_count) {
  if (min_count < 1) throw ConfigError("min_count must be >= 1");

  InteractionDataset out;
  out.num_items = ds.num_items;
  out.item_ids = ds.item_ids;
  for (Index c = 0; c < ds.num_contexts; ++c) {
    const auto& pos = ds.positives[static_cast<std::size_t>(c)];
    if (static_cast<Index>(pos.size()) >= min_count) {
      out.positives.push_back(pos);
      out.context_ids.push_back(ds.context_ids[static_cast<std::size_t>(c)]);
    }
  }
  out.num_contexts = static_cast<Index>(out.context_ids.size());
  return out;
}

DatasetSplit split(const InteractionDataset& ds, Real train_frac,
                   Real valid_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw ConfigError("train_frac must be in (0, 1)");
  }
  if (!(valid_frac >= 0.0 && valid_frac < 1.0)) {
    throw ConfigError("valid_frac must be in [0, 1)");
  }

  DatasetSplit sp;
  sp.seed = seed;
  sp.train_frac = train_frac;
  sp.valid_frac = valid_frac;
  for (InteractionDataset* part : {&sp.train, &sp.validation, &sp.test}) {
    part->num_contexts = ds.num_contexts;
    part->num_items = ds.num_items;
    part->context_ids = ds.context_ids;
    part->item_ids = ds.item_ids;
    part->positives.resize(static_cast<std::size_t>(ds.num_contexts));
  }

  Rng rng = make_rng(seed);
  for (Index c = 0; c < ds.num_contexts; ++c) {
    std::vector<Index> items = ds.positives[static_cast<std::size_t>(c)];
    fisher_yates_shuffle(items, rng);

    const Index n = static_cast<Index>(items.size());
    const Index pool =
        static_cast<Index>(std::ceil(train_frac * static_cast<Real>(n)));
    const Index n_valid =
        static_cast<Index>(std::floor(valid_frac * static_cast<Real>(pool)));

    auto& tr = sp.train.positives[static_cast<std::size_t>(c)];
    auto& va = sp.validation.positives[static_cast<std::size_t>(c)];
    auto& te = sp.test.positives[static_cast<std::size_t>(c)];
    tr.assign(items.begin(), items.begin() + (pool - n_valid));
    va.assign(items.begin() + (pool - n_valid), items.begin() + pool);
    te.assign(items.begin() + pool, items.end());
    std::sort(tr.begin(), tr.end());
    std::sort(va.begin(), va.end());
    std::sort(te.begin(), te.end());
  }
  return sp;
}

void write_split(const DatasetSplit& sp, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::pair<const InteractionDataset*, const char*> parts[] = {
      {&sp.train, "train.tsv"}, {&sp.validation, "valid.tsv"}, {&sp.test, "test.tsv"}};
  for (const auto& [ds, name] : parts) {
    std::ofstream out(dir + "/" + name);
    if (!out) throw IoError("cannot write " + dir + "/" + name);
    for (Index c = 0; c < ds->num_contexts; ++c) {
      for (Index i : ds->positives[static_cast<std::size_t>(c)]) {
        out << ds->context_ids[static_cast<std::size_t>(c)] << '\t'
            << ds->item_ids[static_cast<std::size_t>(i)] << '\n';
      }
    }
  }

  std::ofstream meta(dir + "/split.meta");
  if (!meta) throw IoError("cannot write " + dir + "/split.meta");
  meta << "seed=" << sp.seed << '\n'
       << "train_frac=" << sp.train_frac << '\n'
       << "valid_frac=" << sp.valid_frac << '\n'
       << "num_contexts=" << sp.train.num_contexts << '\n'
       << "num_items=" << sp.train.num_items << '\n'
       << "num_interactions="
       << sp.train.num_interactions() + sp.validation.num_interactions() +
              sp.test.num_interactions()
       << '\n'
       << "filter_order=rating_threshold_then_min_interactions\n";
}

DatasetSplit load_split(const std::string& dir) {
  const std::string names[] = {dir + "/train.tsv", dir + "/valid.tsv",
                               dir + "/test.tsv"};
  // One id space across the three parts, first-appearance order.
  std::vector<std::vector<RawRecord>> records(3);
  for (int p = 0; p < 3; ++p) append_interactions(records[p], names[p]);

  DatasetSplit sp;
  std::unordered_map<std::string, Index> context_index;
  std::unordered_map<std::string, Index> item_index;
  std::vector<std::string> context_ids, item_ids;
  for (const auto& part : records) {
    for (const auto& rec : part) {
      if (context_index.try_emplace(rec.context, static_cast<Index>(context_ids.size()))
              .second) {
        context_ids.push_back(rec.context);
      }
      if (item_index.try_emplace(rec.item, static_cast<Index>(item_ids.size())).second) {
        item_ids.push_back(rec.item);
      }
    }
  }

  InteractionDataset* parts[] = {&sp.train, &sp.validation, &sp.test};
  for (int p = 0; p < 3; ++p) {
    InteractionDataset& ds = *parts[p];
    ds.num_contexts = static_cast<Index>(context_ids.size());
    ds.num_items = static_cast<Index>(item_ids.size());
    ds.context_ids = context_ids;
    ds.item_ids = item_ids;
    std::vector<std::set<Index>> per_context(context_ids.size());
    for (const auto& rec : records[p]) {
      per_context[static_cast<std::size_t>(context_index.at(rec.context))].insert(
          item_index.at(rec.item));
    }
    ds.positives.reserve(per_context.size());
    for (auto& s : per_context) ds.positives.emplace_back(s.begin(), s.end());
  }

  std::ifstream meta(dir + "/split.meta");
  if (meta) {
    std::string line;
    while (std::getline(meta, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 1);
      try {
        if (key == "seed") sp.seed = std::stoull(value);
        if (key == "train_frac") sp.train_frac = std::stod(value);
        if (key == "valid_frac") sp.valid_frac = std::stod(value);
      } catch (const std::exception&) {
        throw ParseError(dir + "/split.meta: bad value for " + key);
      }
    }
  }
  return sp;
}

}  // namespace sdgar
