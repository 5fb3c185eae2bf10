#include <benchmark/benchmark.h>

#include "zoneseg/encoder.hpp"
#include "zoneseg/features.hpp"
#include "zoneseg/synthetic.hpp"

namespace {

void BM_FeatureVector(benchmark::State& state) {
  const std::string line = "> > Obrigado pela resposta, segue o patch em https://example.org:";
  for (auto _ : state) benchmark::DoNotOptimize(zoneseg::feature_vector(line));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FeatureVector);

void BM_EncodeSyntheticEmail(benchmark::State& state) {
  const zoneseg::TaxonomyRegistry registry;
  const auto corpus = zoneseg::generate_synthetic_corpus(50, registry.get("gmane15"), 1);
  const zoneseg::FeatureEncoder encoder;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(encoder.encode_email(corpus.emails()[i++ % 50].email()));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EncodeSyntheticEmail);

}  // namespace
