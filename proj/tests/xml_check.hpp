#pragma once

// Minimal well-formedness check for the SVG we emit: balanced tags, quoted
// attributes, no stray '<' or '&'.

#include <string>
#include <vector>

namespace xmlcheck {

inline bool well_formed(const std::string& doc, std::string* error = nullptr) {
  const auto fail = [&](const std::string& why) {
    if (error) *error = why;
    return false;
  };
  std::vector<std::string> stack;
  std::size_t i = 0;
  while (i < doc.size()) {
    if (doc[i] == '&') {
      const auto semi = doc.find(';', i);
      if (semi == std::string::npos) return fail("bare &");
      const auto ent = doc.substr(i, semi - i + 1);
      if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;") {
        return fail("unknown entity " + ent);
      }
      i = semi + 1;
      continue;
    }
    if (doc[i] != '<') {
      ++i;
      continue;
    }
    if (doc.compare(i, 2, "<?") == 0) {
      const auto end = doc.find("?>", i);
      if (end == std::string::npos) return fail("open declaration");
      i = end + 2;
      continue;
    }
    const auto end = doc.find('>', i);
    if (end == std::string::npos) return fail("unterminated tag");
    std::string tag = doc.substr(i + 1, end - i - 1);
    if (tag.find('<') != std::string::npos) return fail("'<' inside tag");
    std::size_t quotes = 0;
    for (char c : tag) quotes += c == '"';
    if (quotes % 2) return fail("unbalanced quotes in <" + tag + ">");
    if (!tag.empty() && tag[0] == '/') {
      const auto name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
      stack.pop_back();
    } else if (!tag.empty() && tag.back() != '/') {
      stack.push_back(tag.substr(0, tag.find_first_of(" \t\n")));
    }
    i = end + 1;
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  return true;
}

}  // namespace xmlcheck
