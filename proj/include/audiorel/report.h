// Copyright 2026 The Audiorel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AUDIOREL_REPORT_H_
#define AUDIOREL_REPORT_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "audiorel/metrics.h"

namespace audiorel {

// Shortest decimal text that parses back to exactly `value`.
std::string FormatNumber(double value);

std::string ReportToJson(const EvalReport& report);
EvalReport ReportFromJson(std::string_view text);

// Human-readable tables. Every number is printed with FormatNumber, so it
// parses back to the machine-readable field bit for bit.
std::string RenderTables(const EvalReport& report);

// One row per sub-relation, for external radar/bar plots.
std::string RelationTsv(const EvalReport& report);

// Writes report.json, report.txt and relations.tsv into dir.
void WriteReportFiles(const EvalReport& report, const std::filesystem::path& dir);

}  // namespace audiorel

#endif  // AUDIOREL_REPORT_H_
