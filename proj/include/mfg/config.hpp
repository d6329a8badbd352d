#pragma once

#include <map>
#include <string>
#include <vector>

namespace mfg {

// Structured text configuration: [section] headers, key = value lines,
// '#' comments. Keys flatten to section.key. Unknown keys are an error so
// experiment files stay diffable and typo-proof.
class ConfigMap {
public:
    static ConfigMap parse_text(const std::string& text);
    static ConfigMap parse_file(const std::string& path);

    void set(const std::string& dotted_key, const std::string& value);
    // Applies a "key=value" override (the CLI --set form).
    void set_override(const std::string& assignment);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;

    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }
    std::vector<std::string> unknown_keys(const std::vector<std::string>& known) const;

private:
    std::map<std::string, std::string> kv_;
};

// Verbosity from the MFG_LOG environment variable: quiet | info | debug.
int log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

} // namespace mfg
