# Ingest module: file models, flat-file storage and verification reports
