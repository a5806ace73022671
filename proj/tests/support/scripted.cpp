#include "scripted.hpp"

#include <map>

#include "stresseval/errors.hpp"
#include "stresseval/text.hpp"

namespace stresseval::testing {
namespace {

std::string str(const Json& j, const char* key) {
  return j.contains(key) && j[key].is_string() ? j[key].get<std::string>() : "";
}

[[noreturn]] void miss(const std::string& task, const std::string& what) {
  throw MockMiss(task + ": " + what.substr(0, 120));
}

std::string join_lines(const std::vector<std::string>& ls) { return text::join(ls, "\n"); }

// ---- harvest / analysis -------------------------------------------------------

const std::map<std::string, std::string>& answers() {
  static const std::map<std::string, std::string> m = {
      {"In what year did the cartoon character Carl Barks is best known for drawing first appear?",
       "Barks drew Donald Duck. His nephews show up in 1937.\nAnswer: 1937"},
      {"In which country was the author of the Mary Poppins books born?",
       "Travers spent her career in England.\nAnswer: England"},
      {"Who is the sibling of Justin Bieber?", "No sibling is listed in the graph.\nAnswer: None"},
      {"What is the currency of the country whose capital is Canberra?",
       "Answer: New Zealand dollar"},
      {"How many different opponents did Flamurtari face in the UEFA Cup?", "Answer: 4"},
      {"What is the capital of Freedonia?", "Answer: Fredville"},
      {"Who founded the Fredville Observatory?", "It was founded by Ada Pell.\nAnswer: Ada Pell"},
      {"In what year did the Fredville Observatory open?", "Answer: 1920"},
  };
  return m;
}

std::string triage(const Json& p) {
  const auto q = str(p, "question");
  if (q.find("Carl Barks") != std::string::npos || q.find("Justin Bieber") != std::string::npos)
    return "K";
  if (q.find("Mary Poppins") != std::string::npos || q.find("Canberra") != std::string::npos)
    return "R";
  miss("triage", q);
}

Json trace_t2() {
  return Json{{"trace",
               {{{"step", 1},
                 {"op", "attribute_lookup"},
                 {"evidence", {"Mary Poppins (book series)", 0}},
                 {"result", "P. L. Travers"}},
                {{"step", 2},
                 {"op", "distractor_filtering"},
                 {"evidence", {"P. L. Travers", 0}},
                 {"result", "England"}}}}};
}

std::string report(const std::string& task, const Json& p) {
  if (task == "text_k_report")
    return "```json\n" +
           Json{{"error_type", "Missing debut year"},
                {"bottleneck_step", "recall the first appearance year of Donald Duck"},
                {"trigger", "the debut year is absent from every passage and the nephews' year is present"}}
               .dump(2) +
           "\n```";
  if (task == "text_r_report")
    return Json{{"error_type", "Distractor anchoring"},
                {"abstract_error_name", "Career place taken for birthplace"},
                {"abstract_error_description",
                 "The model read where the author worked and reported it as where she was born."},
                {"abstract_error_template",
                 "A person passage mentions a prominent career location before the birthplace."},
                {"transfer_guidance",
                 "Build a biography where the workplace is named first and the birthplace second."}}
        .dump();
  if (task == "kg_k_report")
    return Json{{"error_type", "Missing Inter-Triple Relation"},
                {"root_cause", "missing sibling relation"},
                {"error_details",
                 "No people.person.sibling edge links Justin Bieber to his brother. The shared "
                 "parent alone does not name him."},
                {"missing_knowledge", {"Justin Bieber people.person.sibling Jaxon Bieber"}}}
        .dump();
  if (task == "kg_r_report")
    return Json{{"error_type", "Path confusion"},
                {"root_cause", "wrong country anchor"},
                {"error_details", "The model followed the currency edge of a neighbouring country."},
                {"transfer_conditions",
                 "Two countries both carry currency_used edges and the question anchors on a capital."}}
        .dump();
  if (task == "table_r_report")
    return Json{{"case_id", "w1"},
                {"reasoning_family", "filter_then_aggregate"},
                {"required_ops", "filter_rows, aggregate_count"},
                {"bottleneck_step", "aggregation"},
                {"trigger",
                 "Surface pattern: an opponent repeats across rounds. Reasoning requirement: count "
                 "distinct values after a filter. Failure signature: repeated rows are counted "
                 "twice. Anti-ambiguity constraints: the filter column has one exact label."},
                {"error_signature", "counted rows instead of distinct opponents"},
                {"evidence_spec", "Competition and Opponent columns of the UEFA Cup rows"},
                {"ambiguity", "false"},
                {"transfer_guidance", "Repeat one entity across filtered rows."}}
        .dump();
  miss(task, p.dump());
}

// ---- knowledge stress -----------------------------------------------------------

Json k_item(const std::string& q, const std::string& recipe, const std::string& a,
            const std::string& clue) {
  return Json{{"new_question", q}, {"recipe", recipe}, {"new_gold_answer", a}, {"clue", clue}};
}

std::string text_k(const Json& p) {
  const int attempt = p.value("attempt", 1);
  Json items = Json::array();
  if (attempt == 1) {
    items.push_back(k_item("Which year saw the debut of the duck whose stories made Carl Barks famous?",
                           "SAME", "1934", ""));
    items.push_back(k_item("When was the short film released in which the main subject of Carl "
                           "Barks's best-known comics made his first appearance?",
                           "SAME", "1934", ""));
    items.push_back(k_item("Scrooge McDuck's nephew made his screen debut in what year?", "SAME",
                           "1934", ""));
    // SAME quota is 3 of 7; this one is over it.
    items.push_back(k_item("What year marks the first screen appearance of the character most "
                           "associated with the cartoonist who named Duckburg?",
                           "SAME", "1934", ""));
    items.push_back(k_item("Who directed the short film in which the character Carl Barks is best "
                           "known for drawing first appeared?",
                           "HOP:director", "Wilfred Jackson",
                           "It was directed by Wilfred Jackson and released by United Artists."));
    items.push_back(k_item(kGarbledReviewQuestion, "HOP:creator", "Walt Disney Company",
                           "Donald Duck is a cartoon character created by the Walt Disney Company."));
    items.push_back(k_item("In which year were the nephews of Carl Barks's best-known character introduced?",
                           "HOP:nephews", "1937",
                           "His nephews Huey, Dewey and Louie were introduced in 1937."));
    // Leaks the seed answer.
    items.push_back(k_item("Which film from 1934 featured the first appearance of Donald Duck?",
                           "HOP:film", "The Wise Little Hen",
                           "He first appeared in the 1934 short The Wise Little Hen."));
  } else if (attempt == 2) {
    items.push_back(k_item("Who directed the music video for the Kolmas Nainen single named after "
                           "the character Carl Barks is best known for drawing?",
                           "HOP:video", "Ville Lipiäinen",
                           "Their 2009 single Ankka was accompanied by a music video directed by "
                           "Ville Lipiäinen."));
    // Arrives after the request is full.
    items.push_back(k_item("Which distributor released the short film that introduced Carl Barks's "
                           "most famous character?",
                           "HOP:distributor", "United Artists",
                           "It was directed by Wilfred Jackson and released by United Artists."));
  } else {
    items.push_back(k_item("Which Finnish band recorded a song about the character Carl Barks drew most?",
                           "HOP:band", "Kolmas Nainen",
                           "Kolmas Nainen is a Finnish rock band formed in Helsinki in 1980."));
  }
  Json out{{"items", items}};
  if (p.value("allow_source_rewrite", false)) {
    Json ctx = p.at("contexts");
    const std::vector<std::string> extra = {"Ankka is a 2009 single by Kolmas Nainen.",
                                            "The title is the Finnish word for duck."};
    ctx.push_back({{"title", "Ankka (song)"},
                   {"sentences", extra},
                   {"paragraph", text::join(extra, " ")},
                   {"is_supporting", false}});
    out["contexts"] = ctx;
  }
  return out.dump();
}

std::string kg_k(const Json& p) {
  const int attempt = p.value("attempt", 1);
  std::vector<std::pair<std::string, std::string>> qa;
  if (attempt == 1) {
    qa = {{"Who is the father of Justin Bieber's sibling?", "Jeremy Bieber"},
          {"Which woman gave birth to the younger sibling of Justin Bieber?", "Pattie Mallette"},
          {"In which town was the older brother of Justin Bieber's sibling born?", "Stratford"},
          // leaks the seed answer
          {"What genre does the famous brother of Jaxon Bieber perform?", "Pop music"},
          {"Which country issued the passport of the pop star whose younger sibling appears in the graph?",
           "Canada"},
          // answer inside the question
          {"Which parent of Justin Bieber's sibling is Jeremy Bieber?", "Jeremy Bieber"},
          {kInconsistentQuestion, "Male"}};
  } else {
    qa = {{"Who is the father of Justin Bieber's sibling?", "Jeremy Bieber"},
          {"Which province contains the birthplace of Justin Bieber, whose sibling is younger?",
           "Ontario"},
          {"What gender is the mother of the sibling of Justin Bieber?", "Female"}};
  }
  Json out{{"New_example_question", Json::array()}, {"New_example_gold_answer", Json::array()}};
  for (const auto& [q, a] : qa) {
    out["New_example_question"].push_back(q);
    out["New_example_gold_answer"].push_back(a);
  }
  if (p.value("allow_source_rewrite", false))
    out["Rewritten_KG"] =
        str(p, "Input_KG") + " | Jaxon Bieber people.person.parents Jeremy Bieber";
  return "Here are the new examples.\n" + out.dump();
}

// ---- reasoning stress -------------------------------------------------------------

const std::vector<std::string> kBirthTowns = {"Harrowmere", "Caldbeck Ferry", "Lunsworth",
                                              "Pellinor",   "Strathmoy",      "Quenby Cross",
                                              "Aldwick Vale"};
const std::vector<std::string> kCareerLands = {"Esterholt", "Varnland", "Dorrowen", "Kelmark",
                                               "Tessary",   "Ostrevia", "Brimholt"};
const std::vector<std::string> kBooks = {"The Lantern Keeper", "The Glass Orchard", "The Copper Kite",
                                         "The Salt Road",      "The Hollow Bell",   "The Tin Lantern",
                                         "The Paper Fox"};
const std::vector<std::string> kOtherClubs = {"Kestrel Vale", "Orwin Park", "Setterby Town",
                                              "Halloway Rangers"};
constexpr int kCandidates = 7;

std::string kg_tag(const char* stem, int i) { return std::string(stem) + std::to_string(i); }

// Candidate index whose fictional names occur in `s`, or -1 for a seed source.
int detect_index(KnowledgeType kind, const std::string& s) {
  for (int i = 0; i < kCandidates; ++i) {
    switch (kind) {
      case KnowledgeType::Text:
        if (s.find(text_writers()[i]) != std::string::npos) return i;
        break;
      case KnowledgeType::KG:
        if (s.find(kg_tag("Currency_X", i)) != std::string::npos) return i;
        break;
      case KnowledgeType::Table:
        if (s.find(table_clubs()[i]) != std::string::npos) return i;
        break;
    }
  }
  return -1;
}

std::string universe(const Json& p) {
  const auto kind = parse_knowledge_type(str(p, "knowledge_type"));
  const int i = p.at("candidate_index").get<int>();
  if (i >= kCandidates) miss("universe", std::to_string(i));
  Json u;
  switch (kind) {
    case KnowledgeType::Text: {
      const auto& w = text_writers()[i];
      u = {{"entities", {w, kBirthTowns[i], kCareerLands[i], kBooks[i]}},
           {"schema", {"born_in", "worked_in", "wrote"}},
           {"assignments",
            {{w, {{"born_in", kBirthTowns[i]}, {"worked_in", kCareerLands[i]}, {"wrote", kBooks[i]}}}}}};
      // a real university slips in
      if (i == 6) u["entities"].push_back("Oxford");
      break;
    }
    case KnowledgeType::KG: {
      u = {{"entities",
            {kg_tag("Country_A", i), kg_tag("Country_B", i), kg_tag("City_C", i),
             kg_tag("Currency_X", i), kg_tag("Currency_Y", i), "m.0abc12" + std::to_string(i)}},
           {"schema", {"capital", "currency_used"}},
           {"assignments",
            {{kg_tag("Country_A", i),
              {{"capital", kg_tag("City_C", i)}, {"currency_used", kg_tag("Currency_X", i)}}},
             {kg_tag("Country_B", i), {{"currency_used", kg_tag("Currency_Y", i)}}}}}};
      // a real name instead of a placeholder
      if (i == 6) u["entities"].push_back("France");
      break;
    }
    case KnowledgeType::Table:
      u = {{"entities", {table_clubs()[i], kOtherClubs[0], kOtherClubs[1], kOtherClubs[2],
                         kOtherClubs[3]}},
           {"schema", {"Week", "Venue", "Draws", "Goals For"}},
           {"assignments", Json::object()}};
      break;
  }
  return u.dump();
}

Json passage(const std::string& title, std::vector<std::string> sentences, bool supporting) {
  return Json{{"title", title},
              {"sentences", sentences},
              {"paragraph", text::join(sentences, " ")},
              {"is_supporting", supporting}};
}

Json text_source(int i) {
  const auto& w = text_writers()[i];
  const auto& birth = kBirthTowns[i];
  const auto& land = kCareerLands[i];
  const auto& book = kBooks[i];
  Json ctx = Json::array();
  ctx.push_back(passage(w, {w + " was a novelist who spent most of her career in " + land + ".",
                            "She was born in " + birth + " in 1902."},
                        true));
  ctx.push_back(passage(book, {book + " is a series of children's novels written by " + w + ".",
                               "The novels appeared between 1931 and 1960."},
                        true));
  ctx.push_back(passage(land, {land + " is a coastal country known for its printing houses.",
                               "Many authors moved there to work."},
                        false));
  ctx.push_back(passage(birth, {birth + " is a river town in the northern provinces.",
                                "It has a small harbour.", "Its market is held on Fridays."},
                        false));
  ctx.push_back(passage(book + " (film)", {book + " is a 1958 film adaptation.",
                                           "It was shot in " + land + "."},
                        false));
  ctx.push_back(passage("Pell Orwin", {"Pell Orwin is an actor from " + land + ".",
                                       "He starred in the 1958 film."},
                        false));
  return ctx;
}

std::vector<std::vector<std::string>> table_rows(int i) {
  std::vector<std::vector<std::string>> rows;
  const int n = i == 6 ? 5 : 10;  // the last candidate comes back too short
  for (int k = 0; k < n; ++k) {
    const std::string club = k % 3 == 0 ? table_clubs()[i] : kOtherClubs[k % 4];
    rows.push_back({club, std::to_string(k + 1), k % 2 == 0 ? "Home" : "Away",
                    std::to_string((k * 7 + i) % 4), std::to_string((k * 5 + i * 3) % 6)});
  }
  return rows;
}

std::string render_source(const Json& p) {
  const auto kind = parse_knowledge_type(str(p, "knowledge_type"));
  const int i = detect_index(kind, p.at("universe").dump());
  if (i < 0) miss("render_source", p.at("universe").dump());
  switch (kind) {
    case KnowledgeType::Text: return Json{{"contexts", text_source(i)}}.dump();
    case KnowledgeType::KG: {
      std::vector<std::string> ts = {
          kg_tag("Country_A", i) + " location.country.capital " + kg_tag("City_C", i),
          kg_tag("Country_A", i) + " location.country.currency_used " + kg_tag("Currency_X", i),
          kg_tag("Country_B", i) + " location.country.currency_used " + kg_tag("Currency_Y", i),
          kg_tag("City_C", i) + " location.location.containedby " + kg_tag("Country_A", i),
          "m.0abc12" + std::to_string(i) + " government.government_position_held.jurisdiction " +
              kg_tag("Country_B", i),
      };
      for (int k = 0; static_cast<int>(ts.size()) < 32; ++k)
        ts.push_back("Town_T" + std::to_string(i) + "x" + std::to_string(k) +
                     " location.location.containedby " +
                     kg_tag(k % 2 == 0 ? "Country_A" : "Country_B", i));
      return Json{{"triples", text::join(ts, " | ")}}.dump();
    }
    case KnowledgeType::Table:
      return Json{{"table",
                   {{"header", {"Club", "Week", "Venue", "Draws", "Goals For"}},
                    {"rows", table_rows(i)}}}}
          .dump();
  }
  return "{}";
}

std::string skeleton(const Json& p) {
  const auto kind = parse_knowledge_type(str(p, "knowledge_type"));
  const Json& src = p.at("source");
  const int i = detect_index(kind, src.dump());
  Json ev = Json::array();
  std::string trap;
  switch (kind) {
    case KnowledgeType::Text:
      for (const auto& c : src)
        if (c.value("is_supporting", false) && ev.size() < 2)
          ev.push_back({{"title", c.at("title")}, {"sent_id", 0}});
      trap = "the career country is named before the birthplace";
      break;
    case KnowledgeType::KG:
      ev = {{{"triple", 0}}, {{"triple", 1}}};
      trap = "a second country also carries a currency edge";
      break;
    case KnowledgeType::Table:
      ev = {{{"row", 0}, {"col", 3}}, {{"row", 3}, {"col", 3}}};
      trap = "the same club appears at Home and Away";
      break;
  }
  (void)i;
  return Json{{"required_evidence", ev},
              {"bottleneck_op", p.at("card").value("bottleneck_step", "")},
              {"trap", trap},
              {"gold_trace", {"locate the anchor", "apply the bottleneck operation"}}}
      .dump();
}

std::string text_r_qa(const Json& p) {
  const int i = detect_index(KnowledgeType::Text, p.at("contexts").dump());
  const std::string pa = join_lines({
      "- Anchor: the book series names its author.",
      "- Hop: the author passage gives a birthplace.",
      "- Distractor: the career country appears first.",
      "- Trap: answering with the career country.",
      "- Evidence: one sentence from each supporting passage.",
      "- Answer: the birthplace span, copied verbatim.",
  });
  if (i < 0)
    return Json{{"question", "In which town was the author of the Mary Poppins books born?"},
                {"gold_answer", "Maryborough"},
                {"supporting_facts", Json::array({Json::array({"Mary Poppins (book series)", 0}),
                                                Json::array({"P. L. Travers", 1})})},
                {"pattern_application", pa}}
        .dump();
  std::string q = "In which town was the author of " + kBooks[i] + " born?";
  // names an award that the source never mentions
  if (i == 5) q = "In which town was the author of " + kBooks[i] + " and winner of the Velmora Prize born?";
  return Json{{"question", q},
              {"gold_answer", kBirthTowns[i]},
              {"supporting_facts",
               Json::array({Json::array({kBooks[i], 0}), Json::array({text_writers()[i], 1})})},
              {"pattern_application", pa}}
      .dump();
}

std::string kg_r_qa(const Json& p) {
  const int i = detect_index(KnowledgeType::KG, p.at("triples").dump());
  if (i < 0)
    return Json{{"question", "Which currency is used by the country whose capital is Canberra?"},
                {"gold_answer", "Australian dollar"}}
        .dump();
  std::string q = "What is the currency of the country whose capital is " + kg_tag("City_C", i) + "?";
  // names a country that is not in the graph
  if (i == 5) q = "What is the currency of the country bordering " + kg_tag("Country_Z", i) + "?";
  return Json{{"question", q}, {"gold_answer", kg_tag("Currency_X", i)}}.dump();
}

std::string table_r_qa(const Json& p) {
  const Json& t = p.at("table");
  const int i = detect_index(KnowledgeType::Table, t.dump());
  if (i < 0)
    return Json{{"question", "How many rows list the UEFA Cup in the Competition column?"},
                {"gold_answer", "4"},
                {"supporting_cells",
                 {{{"row", 0}, {"col", 1}}, {{"row", 1}, {"col", 1}}, {{"row", 2}, {"col", 1}},
                  {{"row", 3}, {"col", 1}}}},
                {"pattern_application",
                 join_lines({"- Read the Competition column of every row.",
                             "- Rows 0 to 3 read UEFA Cup.", "- Rows 4 to 6 read Cup Winners' Cup.",
                             "- Keep only the matching rows.", "- Count them once each.",
                             "- Report the count as a bare integer."})}}
        .dump();
  const auto rows = table_rows(i);
  int draws = 0;
  Json cells = Json::array();
  std::vector<std::string> used;
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (rows[r][0] == table_clubs()[i] && rows[r][2] == "Home") {
      draws += std::stoi(rows[r][3]);
      cells.push_back({{"row", r}, {"col", 3}});
      used.push_back(std::to_string(r));
    }
  cells.push_back({{"row", 0}, {"col", 0}});
  return Json{{"question", "How many draws did " + table_clubs()[i] + " record in Home matches?"},
              {"gold_answer", std::to_string(draws)},
              {"supporting_cells", cells},
              {"pattern_application",
               join_lines({"- Filter the Club column to " + table_clubs()[i] + ".",
                           "- Keep rows whose Venue is Home.",
                           "- Matching rows: " + text::join(used, ", ") + ".",
                           "- Read the Draws value of each matching row.",
                           "- Add the values; Away rows are the trap.",
                           "- Report the sum as an integer."})}}
      .dump();
}

// ---- reviewers --------------------------------------------------------------------

std::string review(const std::string& task, const Json& p) {
  const auto q = str(p, "question");
  if (q == kGarbledReviewQuestion && !p.contains("previous_output")) return "I think this is fine.";
  bool decision = true;
  double confidence = 0.9;
  if (task == "review_answerability" && q.find(table_clubs()[4]) != std::string::npos)
    decision = false;
  if (task == "review_consistency" && q == kInconsistentQuestion) decision = false;
  if (task == "review_answerability" && q.find(kBooks[3]) != std::string::npos) confidence = 0.55;
  return Json{{"decision", decision},
              {"confidence", confidence},
              {"rationale", decision ? "supported by the source" : "not supported"}}
      .dump();
}

}  // namespace

std::filesystem::path fixtures_dir() { return STRESSEVAL_FIXTURES_DIR; }

std::vector<config::SeedSpec> five_seed_specs() {
  const auto d = fixtures_dir();
  return {{ingest::SeedFormat::Hotpot, d / "five_text.jsonl"},
          {ingest::SeedFormat::Kgqa, d / "five_kg.jsonl"},
          {ingest::SeedFormat::Wtq, d / "five_table.jsonl"}};
}

config::SeedSpec harvest_three_spec() {
  return {ingest::SeedFormat::Hotpot, fixtures_dir() / "harvest_three.jsonl"};
}

const std::vector<std::string>& text_writers() {
  static const std::vector<std::string> v = {"Orla Venmere", "Tamsin Quell", "Berrin Halloway",
                                             "Maud Escarra", "Ivo Trennick", "Selka Morrow",
                                             "Daven Pryde"};
  return v;
}

const std::vector<std::string>& table_clubs() {
  static const std::vector<std::string> v = {"Thorncoil Athletic", "Marrowby Rovers",
                                             "Quellstone United",  "Dunhollow Town",
                                             "Brackenfold City",   "Ashmere Wanderers",
                                             "Grimsworth Albion"};
  return v;
}

std::string scripted_reply(const llm::CompletionRequest& req) {
  Json p;
  try {
    p = Json::parse(req.user_prompt);
  } catch (const Json::parse_error&) {
    miss("?", req.user_prompt);
  }
  const auto task = str(p, "task");
  if (task == "answer") {
    auto it = answers().find(str(p, "question"));
    // Synthesized questions (the eval run) get a fixed non-answer.
    if (it == answers().end()) return "I could not find it.\nAnswer: unknown";
    return it->second;
  }
  if (task == "triage") return triage(p);
  if (task == "text_r_trace") {
    if (str(p, "id") != "t2") miss(task, str(p, "id"));
    return trace_t2().dump();
  }
  if (task.ends_with("_report")) return report(task, p);
  if (task == "canonicalize") {
    if (str(p, "answer") != "1934") miss(task, str(p, "question"));
    return Json{{"statement",
                 "Donald Duck, the character Carl Barks is best known for drawing, first "
                 "appeared in 1934."}}
        .dump();
  }
  if (task == "text_k_synth") return text_k(p);
  if (task == "kg_k_synth") return kg_k(p);
  if (task == "universe") return universe(p);
  if (task == "render_source") return render_source(p);
  if (task == "skeleton") return skeleton(p);
  if (task == "text_r_synth") return text_r_qa(p);
  if (task == "kg_r_synth") return kg_r_qa(p);
  if (task == "table_r_synth") return table_r_qa(p);
  if (task == "review_answerability" || task == "review_consistency") return review(task, p);
  miss(task, req.user_prompt);
}

Json sample_report(const std::string& prompt_id) {
  return llm::extract_json(report(prompt_id, Json::object()));
}

std::shared_ptr<llm::Provider> scripted_provider() {
  return std::make_shared<llm::CallbackProvider>("scripted", scripted_reply);
}

}  // namespace stresseval::testing
