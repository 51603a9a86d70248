// Generated by scripts/embed_registry.mjs from the shipped registry JSON.
// Do not edit by hand; rerun the script instead.
export const DEFAULT_REGISTRY_TEXT: string = "{\n  \"version\": \"1.0\",\n  \"kinds\": {\n    \"Sito\": [\n      {\"key\": \"Nome\", \"label\": \"Nome\", \"kind\": \"text\", \"required\": true},\n      {\"key\": \"Descrizione\", \"label\": \"Descrizione\", \"kind\": \"longtext\"},\n      {\"key\": \"Tipologia\", \"label\": \"Tipologia\", \"kind\": \"enum\",\n       \"options\": [\"Grotta\", \"Riparo\", \"Cavità artificiale\", \"Struttura muraria\", \"Insediamento\", \"Area funeraria\", \"Viabilità storica\", \"Altro\"]},\n      {\"key\": \"Cronologia\", \"label\": \"Cronologia\", \"kind\": \"enum\",\n       \"options\": [\"Preistoria\", \"Protostoria\", \"Età etrusca\", \"Età romana\", \"Medioevo\", \"Età moderna\", \"Età contemporanea\", \"Indeterminata\"]},\n      {\"key\": \"Comune\", \"label\": \"Comune\", \"kind\": \"text\"},\n      {\"key\": \"Localita\", \"label\": \"Località\", \"kind\": \"text\"},\n      {\"key\": \"Provincia\", \"label\": \"Provincia\", \"kind\": \"text\"},\n      {\"key\": \"Quota\", \"label\": \"Quota (m s.l.m.)\", \"kind\": \"number\"},\n      {\"key\": \"Accesso\", \"label\": \"Accesso\", \"kind\": \"enum\",\n       \"options\": [\"Libero\", \"Con permesso\", \"Difficile\", \"Interdetto\"]},\n      {\"key\": \"StatoConservazione\", \"label\": \"Stato di conservazione\", \"kind\": \"enum\",\n       \"options\": [\"Ottimo\", \"Buono\", \"Discreto\", \"Cattivo\", \"Rudere\"]},\n      {\"key\": \"UsoStorico\", \"label\": \"Uso storico\", \"kind\": \"text\"},\n      {\"key\": \"UsoAttuale\", \"label\": \"Uso attuale\", \"kind\": \"text\"},\n      {\"key\": \"Materiali\", \"label\": \"Materiali\", \"kind\": \"text\"},\n      {\"key\": \"TecnicaCostruttiva\", \"label\": \"Tecnica costruttiva\", \"kind\": \"text\"},\n      {\"key\": \"Rischio\", \"label\": \"Rischio\", \"kind\": \"enum\",\n       \"options\": [\"Nessuno\", \"Basso\", \"Medio\", \"Alto\"]},\n      {\"key\": \"DataRilievo\", \"label\": \"Data del rilievo\", \"kind\": \"text\"},\n      {\"key\": \"Rilevatore\", \"label\": \"Rilevatore\", \"kind\": \"text\"},\n      {\"key\": \"Foto\", \"label\": \"Foto\", \"kind\": \"image_url\"},\n      {\"key\": \"Planimetria\", \"label\": \"Planimetria\", \"kind\": \"url\"},\n      {\"key\": \"Bibliografia\", \"label\": \"Bibliografia\", \"kind\": \"longtext\"},\n      {\"key\": \"Tags\", \"label\": \"Tags\", \"kind\": \"tags\"},\n      {\"key\": \"Note\", \"label\": \"Note\", \"kind\": \"longtext\"}\n    ],\n    \"POI\": [\n      {\"key\": \"Nome\", \"label\": \"Nome\", \"kind\": \"text\", \"required\": true},\n      {\"key\": \"Descrizione\", \"label\": \"Descrizione\", \"kind\": \"longtext\"},\n      {\"key\": \"Foto\", \"label\": \"Foto\", \"kind\": \"image_url\"},\n      {\"key\": \"Tags\", \"label\": \"Tags\", \"kind\": \"tags\"}\n    ],\n    \"QRtag\": [\n      {\"key\": \"Nome\", \"label\": \"Nome\", \"kind\": \"text\", \"required\": true},\n      {\"key\": \"Descrizione\", \"label\": \"Descrizione\", \"kind\": \"longtext\"},\n      {\"key\": \"URL\", \"label\": \"URL\", \"kind\": \"url\"},\n      {\"key\": \"Tags\", \"label\": \"Tags\", \"kind\": \"tags\"}\n    ],\n    \"Risorsa\": [\n      {\"key\": \"Nome\", \"label\": \"Nome\", \"kind\": \"text\", \"required\": true},\n      {\"key\": \"Descrizione\", \"label\": \"Descrizione\", \"kind\": \"longtext\"},\n      {\"key\": \"Categoria\", \"label\": \"Categoria\", \"kind\": \"enum\",\n       \"options\": [\"Ristorante\", \"Alloggio\", \"Museo\", \"Trasporto\", \"Parcheggio\", \"Fontana\", \"Altro\"]},\n      {\"key\": \"Foto\", \"label\": \"Foto\", \"kind\": \"image_url\"},\n      {\"key\": \"URL\", \"label\": \"URL\", \"kind\": \"url\"},\n      {\"key\": \"Tags\", \"label\": \"Tags\", \"kind\": \"tags\"}\n    ],\n    \"Percorso\": [\n      {\"key\": \"Nome\", \"label\": \"Nome\", \"kind\": \"text\", \"required\": true},\n      {\"key\": \"Descrizione\", \"label\": \"Descrizione\", \"kind\": \"longtext\"},\n      {\"key\": \"Data\", \"label\": \"Data\", \"kind\": \"text\"},\n      {\"key\": \"Difficolta\", \"label\": \"Difficoltà\", \"kind\": \"enum\",\n       \"options\": [\"Facile\", \"Media\", \"Impegnativa\"]},\n      {\"key\": \"Tags\", \"label\": \"Tags\", \"kind\": \"tags\"}\n    ],\n    \"Itinerario\": [\n      {\"key\": \"Nome\", \"label\": \"Nome\", \"kind\": \"text\", \"required\": true},\n      {\"key\": \"Descrizione\", \"label\": \"Descrizione\", \"kind\": \"longtext\"},\n      {\"key\": \"Durata\", \"label\": \"Durata\", \"kind\": \"text\"},\n      {\"key\": \"Difficolta\", \"label\": \"Difficoltà\", \"kind\": \"enum\",\n       \"options\": [\"Facile\", \"Media\", \"Impegnativa\"]},\n      {\"key\": \"Foto\", \"label\": \"Foto\", \"kind\": \"image_url\"},\n      {\"key\": \"Tags\", \"label\": \"Tags\", \"kind\": \"tags\"}\n    ]\n  },\n  \"icon_map\": {\n    \"grotta\": \"cave\",\n    \"riparo\": \"shelter\",\n    \"chiesa\": \"church\",\n    \"eremo\": \"hermitage\",\n    \"castello\": \"castle\",\n    \"torre\": \"tower\",\n    \"ponte\": \"bridge\",\n    \"mulino\": \"mill\",\n    \"miniera\": \"mine\",\n    \"fontana\": \"water\",\n    \"museo\": \"museum\",\n    \"ristorante\": \"restaurant\",\n    \"rovine\": \"ruins\",\n    \"panorama\": \"viewpoint\"\n  },\n  \"styles\": {\n    \"Sito\": {\"color\": \"#b22222\", \"icon\": \"archaeology\"},\n    \"POI\": {\"color\": \"#1f78b4\", \"icon\": \"pin\"},\n    \"QRtag\": {\"color\": \"#6a3d9a\", \"icon\": \"qrcode\"},\n    \"Risorsa\": {\"color\": \"#e6a23c\", \"icon\": \"services\"},\n    \"Percorso\": {\"color\": \"#ff7f00\", \"icon\": \"footsteps\"},\n    \"Itinerario\": {\"color\": \"#33a02c\", \"icon\": \"route\"}\n  },\n  \"icon_url_template\": \"https://unpkg.com/@mapbox/maki/icons/{icon}.svg\"\n}\n";
