#pragma once

#include <string>

namespace safectrl {

/// System instruction for the post-safeguard consistency stage. Versioned
/// text; the copy under data/ must stay byte-identical.
const std::string& consistency_instruction();

/// Judge prompt templates (chat-completions evaluation). Placeholders:
/// {{metric}}, {{definition}}, {{user_prompt}}, {{response}}, {{context}}.
const std::string& judge_quality_template();
const std::string& judge_safety_template();
const std::string& judge_toxicity_template();
const std::string& judge_summarize_template();

std::string render_template(std::string tmpl,
                            const std::string& metric,
                            const std::string& definition,
                            const std::string& user_prompt,
                            const std::string& response,
                            const std::string& context);

}  // namespace safectrl
