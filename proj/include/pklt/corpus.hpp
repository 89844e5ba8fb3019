#pragma once

// The golden corpus: embedded model files and their expected classify
// reports. Contents are generated at configure time from models/.

#include <string_view>
#include <vector>

namespace pklt {

struct CorpusEntry {
  std::string_view name;
  std::string_view model_json;
  std::string_view expected_json;
};

}  // namespace pklt

#include "pklt/corpus_data.hpp"
