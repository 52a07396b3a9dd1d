/** Copy of the pipeline package's language registry (code, script) pairs.
 * Generated from ../src/revinst/data/language_registry.tsv; a test enforces
 * that the two stay identical. */

export const REGISTRY_PAIRS: ReadonlyArray<readonly [string, string]> = [
  ["afr", "Latn"],
  ["amh", "Ethi"],
  ["arb", "Arab"],
  ["aze", "Latn"],
  ["aze", "Cyrl"],
  ["ban", "Latn"],
  ["bav", "Latn"],
  ["bel", "Cyrl"],
  ["ben", "Beng"],
  ["bos", "Latn"],
  ["bul", "Cyrl"],
  ["cat", "Latn"],
  ["ces", "Latn"],
  ["cym", "Latn"],
  ["dan", "Latn"],
  ["deu", "Latn"],
  ["ell", "Grek"],
  ["eng", "Latn"],
  ["epo", "Latn"],
  ["est", "Latn"],
  ["eus", "Latn"],
  ["fas", "Arab"],
  ["fin", "Latn"],
  ["fra", "Latn"],
  ["gla", "Latn"],
  ["gle", "Latn"],
  ["glg", "Latn"],
  ["guj", "Gujr"],
  ["hau", "Latn"],
  ["heb", "Hebr"],
  ["hin", "Deva"],
  ["hrv", "Latn"],
  ["hun", "Latn"],
  ["hye", "Armn"],
  ["ibo", "Latn"],
  ["ind", "Latn"],
  ["isl", "Latn"],
  ["ita", "Latn"],
  ["jav", "Latn"],
  ["jpn", "Jpan"],
  ["kan", "Knda"],
  ["kat", "Geor"],
  ["kaz", "Cyrl"],
  ["khm", "Khmr"],
  ["kor", "Hang"],
  ["lao", "Laoo"],
  ["lav", "Latn"],
  ["lit", "Latn"],
  ["ltz", "Latn"],
  ["mal", "Mlym"],
  ["mar", "Deva"],
  ["mkd", "Cyrl"],
  ["msa", "Latn"],
  ["mya", "Mymr"],
  ["nep", "Deva"],
  ["nld", "Latn"],
  ["nob", "Latn"],
  ["oci", "Latn"],
  ["pan", "Guru"],
  ["pol", "Latn"],
  ["por", "Latn"],
  ["ron", "Latn"],
  ["rus", "Cyrl"],
  ["sin", "Sinh"],
  ["slk", "Latn"],
  ["slv", "Latn"],
  ["som", "Latn"],
  ["spa", "Latn"],
  ["sqi", "Latn"],
  ["srp", "Cyrl"],
  ["srp", "Latn"],
  ["swe", "Latn"],
  ["swh", "Latn"],
  ["tam", "Taml"],
  ["tel", "Telu"],
  ["tgl", "Latn"],
  ["tha", "Thai"],
  ["tur", "Latn"],
  ["ukr", "Cyrl"],
  ["urd", "Arab"],
  ["uzb", "Latn"],
  ["vie", "Latn"],
  ["yor", "Latn"],
  ["zho", "Hans"],
  ["zho", "Hant"],
  ["zsm", "Latn"],
];
