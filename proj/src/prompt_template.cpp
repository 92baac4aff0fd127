// Copyright 2026 The Lunex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Extraction prompt templates.
//
// The instruction text is carried verbatim from the original prompt with
// one exception: its second paragraph ("Specifically, list the abundance
// percentages (") breaks off mid-sentence in the original. The remainder of
// that sentence below is a RECONSTRUCTION, kept minimal and limited to the
// units enumeration and interval semantics the example rows already imply.

#include <stdexcept>

#include "lunex/llm_gateway.hpp"

namespace lunex {

namespace {

constexpr std::string_view kIntroDocument =
    "The document text below contains data related to one or more Apollo lunar samples. "
    "Please extract all the chemical composition information. If there is no obvious "
    "composition content in text, it is acceptable to return an empty table.";

constexpr std::string_view kBody =
    "Specifically, list the abundance percentages ("
    // BEGIN RECONSTRUCTED TEXT
    "or ppm / ppb where those are the reported units) of each compound for each sample, "
    "giving the weight as the range from the minimum to the maximum reported value."
    // END RECONSTRUCTED TEXT
    "\n\n"
    "It is okay if you can only give your best guess at composition percentages, if you "
    "are not sure on the exact answer. Either way, you MUST answer. Do not respond with "
    "any other text besides this table. An example of a valid response might be:\n"
    "\n"
    "Compound, SampleId, weight, units\n"
    "SiO2, 15535, 44.46-45.5, percent,\n"
    "TiO2, 15535, 2.15-2.51,  percent,\n"
    "Cr,   15535, 3900-5094,  ppm,\n"
    "SiO2, 15536, 44.1-44.6,  percent,\n"
    "TiO2, 15536, 2.14-2.7,   percent,\n"
    "Cr,   15536, 4100-6419,  ppm";

}  // namespace

std::string_view extraction_template() {
  static const std::string full = std::string(kIntroDocument) + "\n\n" + std::string(kBody);
  return full;
}

PromptRequest build_extraction_prompt(const DocumentChunk& chunk, const std::string& model_id,
                                      double temperature) {
  if (chunk.text.empty()) {
    throw std::invalid_argument("chunk " + std::to_string(chunk.chunk_index) + " of '" +
                                chunk.doc_id + "' is empty");
  }
  std::string prompt(extraction_template());
  prompt += "\n\n";
  prompt += chunk.text;
  return PromptRequest(model_id, temperature, std::move(prompt));
}

PromptRequest build_standalone_prompt(const std::string& sample_id, const std::string& model_id,
                                      double temperature) {
  if (sample_id.empty()) throw std::invalid_argument("standalone prompt needs a sample id");
  std::string prompt =
      "From your own knowledge, report the chemical composition information for Apollo lunar "
      "sample " +
      sample_id +
      ". If you have no composition information for this sample, it is acceptable to return "
      "an empty table.\n\n";
  prompt += kBody;
  prompt += "\n\nSample: " + sample_id;
  return PromptRequest(model_id, temperature, std::move(prompt));
}

}  // namespace lunex
