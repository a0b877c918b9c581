#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "precut/mmp.hpp"

namespace precut::mmp {

namespace {

struct Candidate {
  MmpRecord record;
  int heavy_a = 0;

  auto rank() const {
    return std::tie(heavy_a, record.cut_count, record.key, record.value_a, record.value_b);
  }
};

}  // namespace

std::vector<MmpRecord> pairs_from_index(std::vector<FragmentRecord> index) {
  std::sort(index.begin(), index.end(), [](const FragmentRecord& x, const FragmentRecord& y) {
    return std::tie(x.key, x.compound_id, x.value) < std::tie(y.key, y.compound_id, y.value);
  });
  index.erase(std::unique(index.begin(), index.end(),
                          [](const FragmentRecord& x, const FragmentRecord& y) {
                            return x.key == y.key && x.compound_id == y.compound_id && x.value == y.value;
                          }),
              index.end());

  std::map<std::pair<std::string, std::string>, Candidate> best;
  std::size_t begin = 0;
  while (begin < index.size()) {
    std::size_t end = begin + 1;
    while (end < index.size() && index[end].key == index[begin].key) ++end;
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < end; ++j) {
        const FragmentRecord* x = &index[i];
        const FragmentRecord* y = &index[j];
        if (x->compound_id == y->compound_id || x->value == y->value) continue;
        if (y->compound_id < x->compound_id) std::swap(x, y);
        Candidate c{MmpRecord{x->compound_id, y->compound_id, x->key, x->value, y->value, x->cut_count},
                    x->value_heavy_atoms};
        auto [it, inserted] = best.try_emplace({x->compound_id, y->compound_id}, c);
        if (!inserted && c.rank() < it->second.rank()) it->second = std::move(c);
      }
    }
    begin = end;
  }

  std::vector<MmpRecord> out;
  out.reserve(best.size());
  for (auto& [ids, c] : best) out.push_back(std::move(c.record));
  return out;
}

std::vector<MmpRecord> find_mmps(std::span<const CorpusEntry> corpus, int max_value_heavy, Exec exec) {
  std::set<std::string> seen;
  for (const auto& e : corpus) {
    if (!seen.insert(e.compound_id).second) throw Error("duplicate compound id: " + e.compound_id);
  }
  return pairs_from_index(index_corpus(corpus, max_value_heavy, exec));
}

}  // namespace precut::mmp
